//! End-to-end check at a node: sample the Gauss-norm fiber integral for
//! pi = z0*z1, fit the samples in the expansion basis, and read off the
//! log|t|^2 slope, which should equal the Milnor number 1.

use logsing::fit::{fit_b0, s1_average, ExpansionModel};
use logsing::germ::PolynomialGerm;
use logsing::integrals::{gauss_norm_integral, map_grid, IntegralSample, SampleGrid};

fn main() {
    let germ = PolynomialGerm::parse("z0*z1", 2).unwrap();
    let grid = SampleGrid {
        r_min: 1e-6,
        r_max: 1e-2,
        radii: 30,
        angles: 4,
    };
    let raw = map_grid(&grid, |_, t| {
        Ok(IntegralSample {
            t_re: t.re,
            t_im: t.im,
            value: gauss_norm_integral(t, &germ, 1.0)?,
            est_error: 1e-9,
        })
    })
    .unwrap();

    let fit = fit_b0(&s1_average(&raw), &ExpansionModel::smooth_only(3)).unwrap();
    println!("fitted log|t|^2 coefficient: {:.9}", fit.log_coeff);
    println!("constant term:               {:.9}", fit.constant);
    println!("held-out residual rms:       {:.3e}", fit.residual_rms);
    println!("condition estimate:          {:.3e}", fit.condition_estimate);
    assert!((fit.log_coeff - 1.0).abs() < 0.05);
    println!("slope agrees with the Milnor number 1");
}
