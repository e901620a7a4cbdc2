//! Fiber L-factors: `prod (1 - pi_i(t) T)` from power sums via Newton
//! identities, with the eigenvalue checks (complex modulus `q_t^(n/2)`,
//! q_t-adic slopes `0..n`, leading-coefficient valuation).
//!
//! Run with `cargo run --example fiber_polynomial`.

use klf::config::Caps;
use klf::expsum::Session;
use klf::fiber::{closed_points, fiber_checks, fiber_polynomial};

fn main() -> klf::Result<()> {
    let sess = Session::new(Caps::default());

    // the classical fiber at t = 1 over F_2: 1 + T + 2T^2
    let f2 = sess.field(2, 1)?;
    let f = fiber_polynomial(&sess, 2, 1, 1, &f2.one(), 1)?;
    println!("fiber t=1 over F_2, n=1:");
    for (s, c) in f.coeffs.iter().enumerate() {
        println!("  c_{s} = {c}");
    }
    let rep = fiber_checks(&f, 128, 1e-9)?;
    println!(
        "  weil max rel err {:.2e} (tol {:.0e}), slopes {:?}, leading valuation {} (expected {})\n",
        rep.weil.max_rel_error, rep.weil.tolerance, rep.slopes.slopes, rep.leading.valuation, rep.leading.expected
    );

    // every closed point of degree <= 3 over F_2 and F_3
    for (p, a) in [(2u64, 1u32), (3, 1)] {
        for r in 1..=3u32 {
            for t in closed_points(&sess, p, a, r)? {
                let f = fiber_polynomial(&sess, p, a, r, &t, 1)?;
                let rep = fiber_checks(&f, 128, 1e-9)?;
                println!(
                    "p={p} closed point {:?} of degree {r}: [{}] all checks {}",
                    t.coeffs,
                    f.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "),
                    if rep.all_passed() { "pass" } else { "FAIL" }
                );
            }
        }
    }
    Ok(())
}
