use std::time::Instant;
use cohesive::catalog::{self, ParamSpec};
use cohesive::reconstruct::{build_abel_datum, forward_abel_point};

fn main() {
    for name in ["linear", "bilinear", "hyperbolic", "quad_hyperbolic", "exponential"] {
        let t0 = Instant::now();
        let e = catalog::get(name, &ParamSpec::default()).unwrap();
        let datum = build_abel_datum(&e.target).unwrap();
        let s2 = 1.0f64;
        let mut sup = 0.0f64;
        for i in 0..=128 {
            let t = s2 * (1.0 - 1e-3) * i as f64 / 128.0;
            let fwd = forward_abel_point(&datum, t).unwrap();
            sup = sup.max((fwd - datum.value(t)).abs());
        }
        println!("{name}: sup={sup:.3e} ({:?})", t0.elapsed());
    }
    // superlinear
    let t0 = Instant::now();
    let e = catalog::get("logarithmic", &ParamSpec::default()).unwrap();
    let datum = build_abel_datum(&e.target).unwrap();
    let mut sup = 0.0f64;
    for i in 0..=64 {
        let t = 4.0 * i as f64 / 64.0;
        let fwd = forward_abel_point(&datum, t).unwrap();
        let expected = (1.0 + (t as f64).sqrt()) * (-(t as f64).sqrt()).exp();
        sup = sup.max((fwd - expected).abs());
    }
    println!("logarithmic: sup={sup:.3e} ({:?})", t0.elapsed());
}
