//! Run all three nonexistence criteria on a few contours.

use std::collections::BTreeMap;

use plateau_bound::criteria::{analyze, AnalyzeOptions, Family};
use plateau_bound::generators::{shape_library, Shape};

fn main() {
    let cases = [
        ("antipodal-circles", vec![("epsilon", 0.01)], Some(Family::AntipodalCircles)),
        ("antipodal-circles", vec![("epsilon", 0.3)], None),
        ("coaxial-circles", vec![("half-gap", 2.0)], None),
        ("coaxial-circles", vec![("half-gap", 0.1)], None),
        ("stadium", vec![], Some(Family::Stadium)),
    ];
    for (name, params, family) in cases {
        let params: BTreeMap<String, f64> = params.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        let Shape::Contour(c) = shape_library(name, &params).expect("shape") else { unreachable!() };
        let report = analyze(&c, &AnalyzeOptions { family, ..Default::default() }).expect("analysis");
        println!("== {name} {params:?}");
        print!("{}", report.table());
        println!("exit code {}\n", report.exit_code());
    }
}
