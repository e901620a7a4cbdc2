//! Hodge numbers from the weight enumerator, Hodge and Newton polygons, their
//! exact comparison, and the SVG export.
//!
//! Run with `cargo run --example hodge_newton`. Writes `polygons.svg` into the
//! working directory.

use klf::linop::{r_poly, LinOp};
use klf::poly::IntPoly;
use klf::polygon::{hodge_numbers, hodge_polygon, lies_on_or_above, newton_polygon, polygons_svg};

fn main() -> klf::Result<()> {
    for (n, k) in [(1u32, 3u32), (1, 2), (2, 2), (1, 5), (3, 4)] {
        let r = r_poly(&LinOp::sym(k), n)?;
        let h = hodge_numbers(&r, n)?;
        println!(
            "(n,k) = ({n},{k}): R = {r}, h = {:?}{}",
            h.h.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            if h.exact { "" } else { "  (inexact quotient: no polygon)" }
        );
        if h.exact {
            let hp = hodge_polygon(&h)?;
            println!("  Hodge vertices {:?}", hp.vertices_i64());
        }
    }

    // Newton vs Hodge for L(Sym^3 Kl_1 / F_2) = 1 + 3T - 4T^2
    let l = IntPoly::from_i64(&[1, 3, -4]);
    let np = newton_polygon(&l, 2, 1)?;
    let h = hodge_numbers(&r_poly(&LinOp::sym(3), 1)?, 1)?;
    let hp = hodge_polygon(&h)?;
    println!("\nL = {l} over q = 2:");
    println!("  Newton {:?}", np.vertices_i64());
    println!("  Hodge  {:?}", hp.vertices_i64());
    println!("  comparison: {:?}", lies_on_or_above(&np, &hp));
    std::fs::write("polygons.svg", polygons_svg(&np, &hp))?;
    println!("wrote polygons.svg");
    Ok(())
}
