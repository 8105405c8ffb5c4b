//! Fitting in the expansion space C^inf + sum_r |t|^{2r}(log|t|)^k C^inf:
//! exact recovery of an in-span function and greedy exponent selection.

use logsing::fit::{exponent_scan, fit_b0, ExpansionModel, Exponent};
use logsing::integrals::IntegralSample;

fn samples(f: impl Fn(f64) -> f64) -> Vec<IntegralSample> {
    let (lo, hi, n) = ((1e-6f64).ln(), (1e-1f64).ln(), 48);
    (0..n)
        .map(|i| {
            let r = (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp();
            IntegralSample {
                t_re: r,
                t_im: 0.0,
                value: f(r),
                est_error: 0.0,
            }
        })
        .collect()
}

fn main() {
    let r13 = Exponent::new(1, 3);

    // truth: 2 - 0.5 log|t|^2 + 3|t|^2 + 1.25 |t|^{2/3} log|t|
    let data = samples(|r| {
        2.0 - 0.5 * (r * r).ln() + 3.0 * r * r + 1.25 * r.powf(2.0 / 3.0) * r.ln()
    });
    let model = ExpansionModel::new(2, &[r13], 1).unwrap();
    let fit = fit_b0(&data, &model).unwrap();
    println!("log coeff  {:+.12} (truth -0.5)", fit.log_coeff);
    println!("constant   {:+.12} (truth +2.0)", fit.constant);
    println!("|t|^2      {:+.12} (truth +3.0)", fit.smooth_coeffs[0]);
    println!(
        "r=1/3, k=1 {:+.12} (truth +1.25)",
        fit.term_coeffs[&(r13, 1)]
    );
    assert!(fit.residual_rms < 1e-9);

    // which singular exponents does the scan pick, given only the data?
    let candidates = [Exponent::new(1, 4), r13, Exponent::new(1, 2)];
    let chosen = exponent_scan(&data, &ExpansionModel::smooth_only(2), &candidates, 1);
    println!("scan selected pairs: {:?}", chosen.pairs);
    assert!(chosen.pairs.contains(&(r13, 1)));
}
