use charforge::optimizer::{optimize, OptimizeConfig};
use charforge_cli::bench::Suite;
fn main() {
    for s in Suite::ALL {
        for n in 2..=8 {
            let c = s.circuit(n, 42).unwrap();
            let t = std::time::Instant::now();
            let (o, r) = optimize(&c, &OptimizeConfig { verify: None, ..Default::default() }).unwrap();
            println!(
                "{s} {n} gates {} -> {} segs {} {:?}",
                c.gate_count(),
                o.gate_count(),
                r.segments.len(),
                t.elapsed()
            );
        }
    }
}
