//! Hyper-Kloosterman fiber sums two ways: direct enumeration and
//! multiplicative convolution over the unit group.
//!
//! Run with `cargo run --example fiber_sums`.

use klf::config::Caps;
use klf::expsum::{all_fibers_convolution, fiber_sum_naive, Session};

fn main() -> klf::Result<()> {
    let sess = Session::new(Caps::default());

    println!("T(t; F_q) = sum over (F_q^*)^n of zeta_p^Tr(x_1+...+x_n + t/(x_1...x_n))\n");

    for (p, d, n) in [(3u64, 1u32, 1u32), (5, 1, 1), (2, 2, 1), (3, 2, 2)] {
        let field = sess.field_with_tables(p, d)?;
        println!("field F_{} (p = {p}), n = {n}:", field.size());
        let table = all_fibers_convolution(&field, n, &sess)?;
        let g = field.generator();
        for i in 0..(field.size() - 1) {
            let t = field.pow(&g, i as u128);
            let naive = fiber_sum_naive(&field, &t, n, &sess)?;
            assert_eq!(naive, table[i as usize], "the two methods must agree");
            println!("  t = {:?}: T = {}", t.coeffs, naive);
        }
        println!();
    }

    println!("every line above was computed twice (naive + convolution) and compared");
    Ok(())
}
