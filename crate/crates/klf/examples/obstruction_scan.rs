//! Obstruction counts `d(L, n, p)` and prime scans: which characteristics
//! break the vanishing-sum condition for a given operation.
//!
//! Run with `cargo run --example obstruction_scan`.

use klf::config::Caps;
use klf::linop::{d_obstruction_general, scan_primes, LinOp};

fn main() -> klf::Result<()> {
    let caps = Caps::default();

    println!("d_k(n,p) for symmetric powers (degenerate roots flagged *):\n");
    print!("{:>8}", "n\\k,p");
    let primes = [2u64, 3, 5, 7, 11, 13];
    for p in primes {
        print!("{p:>6}");
    }
    println!();
    for n in 1..=4u32 {
        for k in 1..=4u32 {
            print!("n={n} k={k} ");
            for p in primes {
                let d = d_obstruction_general(&LinOp::sym(k), n, p, &caps)?;
                print!("{:>5}{}", d.count, if d.degenerate { "*" } else { " " });
            }
            println!();
        }
    }

    println!("\nprimes below 50 with nonzero count:");
    for (n, op) in [
        (1u32, LinOp::sym(3)),
        (2, LinOp::sym(2)),
        (5, LinOp::sym(5)),
        (2, LinOp::parse("ext:2")?),
        (1, LinOp::parse("tensor:2")?),
    ] {
        let hits = scan_primes(&op, n, 50, &caps)?;
        println!(
            "  {} at n = {n}: {:?}",
            op.name(),
            hits.iter().map(|e| (e.p, e.count)).collect::<Vec<_>>()
        );
    }
    Ok(())
}
