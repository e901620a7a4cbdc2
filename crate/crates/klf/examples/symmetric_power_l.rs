//! Assemble a symmetric-power L-function of the Kloosterman family and split
//! off its trivial factor: `L = P * M` with `P = A_0 A_inf / B`.
//!
//! Run with `cargo run --release --example symmetric_power_l`.

use klf::config::Caps;
use klf::expsum::Session;
use klf::lfunction::assemble;
use klf::linop::LinOp;

fn main() -> klf::Result<()> {
    let mut sess = Session::new(Caps::default());
    sess.caps.work_cap = 1 << 34;

    for (p, a, n, k) in [(2u64, 1u32, 1u32, 3u32), (2, 1, 1, 5), (3, 1, 2, 2)] {
        let asm = assemble(&sess, p, a, n, &LinOp::sym(k))?;
        println!("Sym^{k} of the {n}-variable family over F_{}:", p.pow(a));
        println!("  d(n,p) = {}{}", asm.d_obstruction.count,
            if asm.d_obstruction.degenerate { " (degenerate)" } else { "" });
        println!("  series c-side truncation: {}", asm.truncation);
        println!("  L = {}", asm.l);
        if let Some(t) = &asm.trivial {
            println!("  P = {}", t.p_reduced);
        }
        if let Some(m) = &asm.m_pure {
            println!("  M = {}", m);
        }
        if let Some(dc) = &asm.degree_check {
            println!("  degree formula: found {} expected {} -> {}", dc.found, dc.expected,
                if dc.passed { "pass" } else { "FAIL" });
        }
        if let (Some(np), Some(hp)) = (&asm.newton_polygon_l, &asm.hodge_polygon) {
            println!("  Newton {:?}", np.vertices_i64());
            println!("  Hodge  {:?}", hp.vertices_i64());
        }
        if let Some(cmp) = &asm.comparison {
            println!("  Newton vs Hodge: {cmp:?}");
        }
        for w in &asm.warnings {
            println!("  note: {w}");
        }
        println!();
    }
    Ok(())
}
