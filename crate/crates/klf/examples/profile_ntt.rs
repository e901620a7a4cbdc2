use std::time::Instant;
fn main() {
    // one forward NTT of 2^25 via the public conv (2 fwd + 1 inv + pointwise)
    let len = 9_765_624usize;
    let a: Vec<i64> = (0..len as i64).map(|i| (i * 31 % 7) - 3).collect();
    let t0 = Instant::now();
    let c = klf::ntt::cyclic_convolve(&a, &a, (len as u128) * 49).unwrap();
    println!("pairwise cyclic convolve len {}: {:?} (3 transforms) sum {}", len, t0.elapsed(), c.iter().take(3).map(|x| *x as i128).sum::<i128>());
}
