//! Run the verification harness over the desk-scale battery.
//!
//! Run with `cargo run --release --example verify_battery`.

use klf::verify::cmd_verify;
use klf::RunConfig;

fn main() -> klf::Result<()> {
    // (n, k, p, a); the obstruction count vanishes on each of these, so the
    // degree formula and the Newton-over-Hodge bound both apply
    let battery = [(1u32, 3u32, 2u64, 1u32), (1, 5, 2, 1), (1, 3, 5, 1), (2, 2, 3, 1)];
    for (n, k, p, a) in battery {
        let mut cfg = RunConfig::new(p, a, n, &format!("sym:{k}"));
        cfg.caps.work_cap = 1 << 38;
        let rep = cmd_verify(&cfg, true)?;
        println!("== p={p} a={a} n={n} sym:{k}  ->  {}", if rep.all_passed { "ALL PASS" } else { "FAILURES" });
        for c in &rep.claims {
            println!("  [{:?}] {} ({} ms): {}", c.verdict, c.id, c.runtime_ms, c.detail);
        }
        println!();
    }
    Ok(())
}
