//! Index classification, boundary order and an aligned configuration for a few
//! exponent vectors, including the integral ones.
//!
//!     cargo run --example classify_parameters

use twisted_fd::parameters::{aligned_configuration, default_spacing, ParameterVector, Scalar};

fn show(label: &str, pv: &ParameterVector) {
    let cls = pv.classify();
    println!("{label}");
    println!("  alpha       {}", pv.entries.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", "));
    println!("  holomorphic {:?}  (r = {})", cls.holomorphic, cls.r());
    println!("  polar       {:?}  (s = {})", cls.polar, cls.s());
    println!("  nonintegral {:?}", cls.nonintegral);
    println!("  order       {:?}", cls.ordered);
    match aligned_configuration(&cls, default_spacing(pv.m)) {
        Ok(x) => println!("  aligned x   {:?}", x.x.iter().map(|z| z.re).collect::<Vec<_>>()),
        Err(e) => println!("  aligned x   none: {e}"),
    }
}

fn main() {
    show("all zero, m = 2", &ParameterVector::integers(&[0, 0, 0, 0, 0]).unwrap());
    show("u = t - 1, m = 2", &ParameterVector::integers(&[0, 0, 0, 1, -1]).unwrap());
    let mixed = ParameterVector::from_alpha(vec![
        Scalar::ratio(1, 3),
        Scalar::int(1),
        Scalar::int(-2),
        Scalar::ratio(1, 2),
        Scalar::ratio(1, 5),
        Scalar::ratio(-1, 30),
    ])
    .unwrap();
    show("one holomorphic, one polar, m = 3", &mixed);
    // a = 1/2, b = (1/3), c = 3/4
    let abc = ParameterVector::from_abc(Scalar::ratio(1, 2), vec![Scalar::ratio(1, 3)], Scalar::ratio(3, 4)).unwrap();
    show("from (a, b, c), m = 1", &abc);
    show("no realizable order", &ParameterVector::from_alpha(vec![
        Scalar::int(-1),
        Scalar::ratio(1, 2),
        Scalar::int(1),
        Scalar::ratio(-1, 2),
    ]).unwrap());
}
