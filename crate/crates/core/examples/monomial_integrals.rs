//! Fiber integrals of log|z^nu - t|^2 over products of projective lines:
//! the peeled closed form against known special cases and against direct
//! nested quadrature.

use logsing::integrals::{monomial_f, monomial_f_direct, MonomialExponents};
use num::complex::Complex64;

fn main() {
    let tol = 1e-10;
    for t_abs in [0.5, 0.1, 0.01] {
        let t = Complex64::new(t_abs, 0.0);
        let r2 = t_abs * t_abs;

        let f1 = monomial_f(t, &MonomialExponents { nu: vec![1] }, tol).unwrap();
        println!("nu=(1)   t={t_abs}: {f1:+.12}  closed form {:+.12}", (1.0 + r2).ln());

        // the double covering z -> z^2 doubles the one-variable value
        let f2 = monomial_f(t, &MonomialExponents { nu: vec![2] }, tol).unwrap();
        println!("nu=(2)   t={t_abs}: {f2:+.12}  closed form {:+.12}", 2.0 * (1.0 + t_abs).ln());

        let nu11 = MonomialExponents { nu: vec![1, 1] };
        let f11 = monomial_f(t, &nu11, tol).unwrap();
        let exact = -r2 * r2.ln() / (1.0 - r2);
        println!("nu=(1,1) t={t_abs}: {f11:+.12}  closed form {exact:+.12}");

        // independent check: Jensen-reduced direct quadrature
        let direct = monomial_f_direct(t, &nu11, 1e-9).unwrap();
        assert!((f11 - direct).abs() < 1e-7, "peel {f11} vs direct {direct}");
    }
    println!("peeled recursion matches direct quadrature");
}
