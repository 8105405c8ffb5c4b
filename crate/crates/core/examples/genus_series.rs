//! Exact genus series: Todd, its inverse, and the defect series whose
//! x^n coefficient (-1)^n/(n+2)! scales the predicted log coefficient.

use logsing::rational::to_string_frac;
use logsing::series::{td_defect_series, td_inverse_series, td_series};

fn show(name: &str, coeffs: &[logsing::Rational]) {
    let rendered: Vec<String> = coeffs.iter().map(to_string_frac).collect();
    println!("{name:<24} {}", rendered.join(", "));
}

fn main() {
    let order = 8;
    show("Td(x)", td_series(order).coeffs());
    show("Td(x)^-1", td_inverse_series(order).coeffs());
    show("1/x - (1-e^-x)/x^2", td_defect_series(order).coeffs());

    // the defect series equals Td^-1 composed through (Td - 1)/x
    let td = td_series(order + 1);
    let td_inv = td_inverse_series(order);
    let shifted: Vec<_> = td.coeffs()[1..].to_vec(); // (Td - 1)/x
    let product = logsing::TruncatedSeries::from_coeffs(shifted)
        .mul(&td_inv)
        .truncate(order);
    assert_eq!(product, td_defect_series(order));
    println!("defect identity holds to order {order}");
}
