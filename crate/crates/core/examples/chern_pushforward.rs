//! Rank-2 Chern calculus: the E-genus in Q[c2], and the intersection-
//! theoretic coefficient for s nodes cross-checked against the Milnor
//! formula -s*r/6.

use logsing::chern::{e_genus_rank2, char_number_coefficient, milnor_formula_coefficient, CharNumbers};
use logsing::rational::{rat, to_string_frac};

fn main() {
    let e = e_genus_rank2(4);
    let rendered: Vec<String> = (0..=4).map(|k| to_string_frac(&e.coefficient(k))).collect();
    println!("E-genus in powers of c2: {}", rendered.join(", "));

    for s in [1i64, 2, 5] {
        for r in [1i64, 2] {
            let via_classes = char_number_coefficient(&CharNumbers::points(s), r).unwrap();
            let via_milnor = milnor_formula_coefficient(1, r, s);
            assert_eq!(via_classes, via_milnor);
            assert_eq!(via_classes, rat(-s * r, 6));
            println!(
                "s = {s}, rank = {r}: both routes give {}",
                to_string_frac(&via_classes)
            );
        }
    }
}
