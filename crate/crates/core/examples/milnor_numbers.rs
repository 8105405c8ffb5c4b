//! Milnor numbers by Jacobian-ideal quotient dimension, checked against
//! the quasi-homogeneous product formula where it applies.

use logsing::germ::PolynomialGerm;
use logsing::milnor::{milnor_number, milnor_quasihomogeneous, Mu};
use logsing::rational::rat;

fn main() {
    let cases = [
        ("z0*z1", 2),
        ("z0^2 + z1^2", 2),
        ("z0^3 + z1^3", 2),
        ("z0^2 + z1^3", 2),              // cusp
        ("z0^3 + z1^3 + z2^3", 3),       // cone over a cubic
        ("z0^2*z1 + z1^3", 2),           // D4 (mu = 4)
        ("z0^2 + z1^2 + z2^2 + z3^2", 4),
    ];
    for (text, nvars) in cases {
        let germ = PolynomialGerm::parse(text, nvars).unwrap();
        let result = milnor_number(&germ, None).unwrap();
        match result.mu {
            Mu::Finite(mu) => println!(
                "mu({text}) = {mu}   (degree bound {})",
                result.degree_bound_used
            ),
            Mu::Infinite => println!("mu({text}) = infinity"),
        }
    }

    // z0^a + z1^b is quasi-homogeneous with weights 1/a, 1/b
    let (a, b) = (3i64, 5i64);
    let germ = PolynomialGerm::parse("z0^3 + z1^5", 2).unwrap();
    let quotient = match milnor_number(&germ, None).unwrap().mu {
        Mu::Finite(mu) => mu as u64,
        Mu::Infinite => unreachable!(),
    };
    let weighted =
        milnor_quasihomogeneous(&[rat(1, a), rat(1, b)], &rat(1, 1)).unwrap();
    assert_eq!(quotient, weighted);
    println!("z0^{a} + z1^{b}: quotient route = product formula = {quotient}");
}
