//! The trivial factor `P(n,k,T) = A_0 A_inf / B` piece by piece, including
//! the all-even case where `B` is nontrivial and one of its factors cancels
//! against `A_inf`.
//!
//! Run with `cargo run --example trivial_factor`.

use klf::config::Caps;
use klf::trivial::{a0_factor, a_infty_factor, b_factor, mk_coefficients, orbit_data, trivial_factor};

fn main() -> klf::Result<()> {
    let caps = Caps::default();

    // the all-even configuration (p, n, k) = (2, 2, 2) over q = 2
    let (n, k, q, p) = (2u32, 2u32, 2u64, 2u64);
    println!("m_k coefficients for (n,k) = ({n},{k}): {:?}", mk_coefficients(n, k)?);
    let d = orbit_data(n, k, p, &caps)?;
    println!("S_k(n,p) = {:?}", d.s_k);
    println!("shift orbits: {} (reps {:?})", d.a_k, d.orbit_reps);
    let a0 = a0_factor(n, k)?;
    let (ainf, diag) = a_infty_factor(n, k, q, p, &caps)?;
    let b = b_factor(n, k, p);
    println!("A_0 = {}", a0.expand(q));
    println!("A_inf = {} (branch: {})", ainf.expand(q), diag.branch);
    println!("B = {}", b.expand(q));
    let t = trivial_factor(n, k, q, p, &caps)?;
    println!("P reduced = {}   <- the (1-4T) in B cancelled against A_inf\n", t.p_reduced);

    // a sign-data case: n odd, k even
    let (n, k, q, p) = (1u32, 2u32, 3u64, 3u64);
    let d = orbit_data(n, k, p, &caps)?;
    println!("(n,k,p) = (1,2,3): S = {:?}, a = {}, b = {:?}, c = {:?}", d.s_k, d.a_k, d.b_k, d.c_k);
    let t = trivial_factor(n, k, q, p, &caps)?;
    println!("P = {}", t.p_reduced);
    if let Some(w) = &t.a_inf_diagnostics.warning {
        println!("warning: {w}");
    }
    Ok(())
}
