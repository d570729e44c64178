use num_bigint::BigInt;

#[test]
#[ignore]
fn micro_bigint() {
    let m: BigInt = (BigInt::from(987654321u64).pow(170) % (BigInt::from(1) << 4540)) | BigInt::from(1);
    let m2: BigInt = &m + 12345;
    let n = 1000u32;

    let t0 = std::time::Instant::now();
    for _ in 0..n { std::hint::black_box(m.trailing_zeros()); }
    println!("trailing_zeros: {:?}", t0.elapsed() / n);

    let t0 = std::time::Instant::now();
    for _ in 0..n { std::hint::black_box(&m >> 3u32); }
    println!("shift: {:?}", t0.elapsed() / n);

    let t0 = std::time::Instant::now();
    for _ in 0..n { std::hint::black_box(&m - &m2); }
    println!("sub: {:?}", t0.elapsed() / n);

    let t0 = std::time::Instant::now();
    for _ in 0..n { std::hint::black_box(&m * &m2); }
    println!("mul 4540x4540: {:?}", t0.elapsed() / n);

    let t0 = std::time::Instant::now();
    for _ in 0..n { std::hint::black_box(BigInt::from(1) << 4541u32); }
    println!("one<<4541: {:?}", t0.elapsed() / n);

    // the three lines of the series loop at real sizes
    let w = 4540u64;
    let xc: BigInt = &m >> 26u32;
    let mut term_v: BigInt = BigInt::from(1) << w;
    let t0 = std::time::Instant::now();
    for i in 0..n as u64 {
        term_v = (&term_v * &xc) >> w;
        term_v /= i + 1;
        if term_v.bits() < 10 { term_v = BigInt::from(1) << w; }
    }
    println!("series core line: {:?}", t0.elapsed() / n);
}
