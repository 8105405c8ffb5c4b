//! Full pipeline through the report types: build a family spec in code,
//! predict exactly, verify numerically, and print the JSON report twice to
//! show that a fixed seed gives byte-identical output.

use logsing::commands::cmd_verify;
use logsing::family::{FamilySpec, GermSpec, VerifyMode, VerifySpec};
use logsing::integrals::SampleGrid;

fn main() {
    let spec = FamilySpec {
        germs: vec![GermSpec::from_poly("node", "z0*z1")],
        fiber_dimension: 1,
        bundle_rank: 1,
        char_numbers: None,
        seed: 42,
        tolerance: None,
        verify: Some(VerifySpec {
            mode: VerifyMode::GaussNorm,
            grid: SampleGrid {
                r_min: 1e-6,
                r_max: 1e-2,
                radii: 20,
                angles: 2,
            },
            chi: None,
            monomial_exponents: None,
            cutoff: None,
            samples: None,
        }),
    };

    let report = cmd_verify(&spec).unwrap();
    let first = serde_json::to_string_pretty(&report).unwrap();
    println!("{first}");

    let second = serde_json::to_string_pretty(&cmd_verify(&spec).unwrap()).unwrap();
    assert_eq!(first, second);
    println!("-- second run byte-identical --");
}
