//! The finite reduced-cohomology model: graded matrices of `nabla_G` on
//! `Sym^k` of the rank-(n+1) module over `F_q[t]`, injectivity, cokernel
//! dimensions, the constant basis, and filtered reduction modulo
//! `t d/dt + nabla_G`.
//!
//! Run with `cargo run --example reduced_cohomology`.

use klf::config::Caps;
use klf::expsum::Session;
use klf::redcoh::{
    coker_dimensions, constant_basis, injectivity_report, nabla_matrix, partial1_reduce,
    GradedSymModule, Monomial,
};

fn main() -> klf::Result<()> {
    let sess = Session::new(Caps::default());

    let field = sess.field(2, 1)?;
    let sm = GradedSymModule::new(field, 1, 3);
    println!("Sym^3 of the rank-2 module over F_2[t]; monomial basis e0^i0 e1^i1 t^r\n");

    let map = nabla_matrix(&sm, 6);
    for b in &map.blocks {
        println!(
            "weight {}: {}x{} block, rank {}, entries {:?}",
            b.weight, b.rows, b.cols, b.rank, b.entries
        );
    }

    let inj = injectivity_report(&sm, 6);
    println!("\ninjective: {} (window up to weight {})", inj.injective, inj.window);
    let dims = coker_dimensions(&sm, 6);
    println!("cokernel dimensions by weight: {dims:?}");
    let basis = constant_basis(&sm)?;
    println!("constant basis B_3 = {basis:?}  (e0^3 and e0 e1^2)");

    // reduce t e0^3: it lies in the image of t d/dt + nabla_G
    let ci = sm.comps.iter().position(|c| c == &[3, 0]).unwrap();
    let xi = vec![(sm.field.one(), Monomial { r: 1, comp: ci })];
    let (coords, zeta) = partial1_reduce(&sm, &xi)?;
    println!("\nreduce t*e0^3: coordinates {coords:?}, certificate monomials {}", zeta.len());

    // a case with nontrivial kernel
    let field3 = sess.field(3, 1)?;
    let sm3 = GradedSymModule::new(field3, 1, 3);
    let inj3 = injectivity_report(&sm3, 6);
    println!("\nsame module over F_3: injective = {}, kernel weights {:?}", inj3.injective, inj3.kernel_weights);
    Ok(())
}
