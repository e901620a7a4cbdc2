use klf::config::Caps;
use klf::expsum::Session;
use klf::lfunction;
use klf::linop::LinOp;
use std::time::Instant;

fn main() {
    let mut sess = Session::new(Caps::default());
    sess.caps.work_cap = 1 << 38;
    for (p, a, n, k) in [(2u64, 1u32, 1u32, 3u32), (1, 1, 1, 1)] {
        if p == 1 { break; }
        let t0 = Instant::now();
        let asm = lfunction::assemble(&sess, p, a, n, &LinOp::sym(k)).unwrap();
        println!("({p},{a},{n},{k}): L = {} in {:?}", asm.l, t0.elapsed());
    }
    let t0 = Instant::now();
    let asm = lfunction::assemble(&sess, 2, 1, 1, &LinOp::sym(5)).unwrap();
    println!("(2,1,1,5): L = {} in {:?}", asm.l, t0.elapsed());
    let t0 = Instant::now();
    let asm = lfunction::assemble(&sess, 3, 1, 2, &LinOp::sym(2)).unwrap();
    println!("(3,1,2,2): L = {} in {:?}", asm.l, t0.elapsed());
    let t0 = Instant::now();
    let asm = lfunction::assemble(&sess, 5, 1, 1, &LinOp::sym(3)).unwrap();
    println!("(5,1,1,3): L = {} in {:?}", asm.l, t0.elapsed());
}
