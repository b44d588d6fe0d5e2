use cohesive::catalog::{self, ParamSpec};
use cohesive::forward::CohesiveSolver;

fn main() {
    for name in ["dugdale", "linear", "bilinear", "hyperbolic", "exponential", "logarithmic"] {
        eprintln!("== {name}: get...");
        let e = catalog::get(name, &ParamSpec::default()).unwrap();
        for (i, am) in e.models.iter().enumerate() {
            let t0 = std::time::Instant::now();
            eprintln!("  [{i}] solver...");
            match CohesiveSolver::new(&am.model) {
                Ok(solver) => {
                    eprintln!("  [{i}] solver ok ({:?}), curve...", t0.elapsed());
                    let sf = e.target.s_frac0;
                    let grid: Vec<f64> = (1..=40).map(|j| sf * 1.05 * j as f64 / 40.0).collect();
                    match solver.curve(&grid) {
                        Ok(_) => eprintln!("  [{i}] curve ok ({:?})", t0.elapsed()),
                        Err(err) => eprintln!("  [{i}] CURVE ERR {err} ({:?})", t0.elapsed()),
                    }
                }
                Err(err) => eprintln!("  [{i}] SOLVER ERR {err} ({:?})", t0.elapsed()),
            }
        }
    }
}
