use std::time::Instant;
use cohesive::catalog::{self, ParamSpec};
use cohesive::forward::{jump_threshold, jump_threshold_table};

fn main() {
    let t0 = Instant::now();
    let e = catalog::get("dugdale", &ParamSpec::default()).unwrap();
    println!("get: {:?}", t0.elapsed());
    let am = &e.models[0];
    for &m in &[0.05, 0.5, 0.95, 0.99, 0.9918] {
        let t0 = Instant::now();
        let v = jump_threshold(&am.model, m).unwrap();
        println!("Phi({m}) = {v:.8} in {:?}", t0.elapsed());
    }
    let t0 = Instant::now();
    let tab = jump_threshold_table(&am.model, 512).unwrap();
    println!("table: {:?}  class {:?} dom {:?}", t0.elapsed(), tab.classification, tab.table.domain());
}
