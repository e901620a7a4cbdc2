use klf::config::Caps;
use klf::expsum::Session;
use std::time::Instant;

fn main() {
    let mut sess = Session::new(Caps::default());
    sess.caps.work_cap = 1 << 38;
    let t0 = Instant::now();
    let f = sess.field(5, 10).unwrap();
    println!("construct F_5^10 (poly+generator): {:?}", t0.elapsed());
    let t0 = Instant::now();
    f.dlog_tables(&sess.caps).unwrap();
    println!("dlog/zech/trace tables: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let all = klf::expsum::all_fibers_convolution(&f, 1, &sess).unwrap();
    println!("all-fiber convolution: {:?} ({} fibers)", t0.elapsed(), all.len());
}
