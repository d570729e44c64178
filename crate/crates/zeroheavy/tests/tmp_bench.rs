use zeroheavy::elementary::exp_enclosure;
use zeroheavy::oracle::{self, parse};
use zeroheavy::rational::{base_pow, Rational};
use num_bigint::BigInt;

#[test]
#[ignore]
fn bench_exp() {
    // dyadic argument at ~4400-bit scale, like the family run sees
    let num = BigInt::from(123456789u64).pow(200) % (BigInt::from(1) << 4400);
    let x = Rational::new(num, BigInt::from(1) << 4402) + Rational::new(BigInt::from(1), BigInt::from(2));
    let t0 = std::time::Instant::now();
    for _ in 0..10 {
        let _ = exp_enclosure(&x, 4400).unwrap();
    }
    println!("exp_enclosure@4400bits: {:?}/call", t0.elapsed() / 10);

    let f = parse("exp(5*x)").unwrap();
    let t0 = std::time::Instant::now();
    for _ in 0..10 {
        let _ = oracle::eval_point_bits(&f, &x, 4400).unwrap();
    }
    println!("eval exp(5x)@4400bits: {:?}/call", t0.elapsed() / 10);

    let iv = zeroheavy::RationalInterval::new(x.clone(), &x + base_pow(2, -4300)).unwrap();
    let t0 = std::time::Instant::now();
    for _ in 0..10 {
        let _ = oracle::eval_interval_bits(&f, &iv, 4400).unwrap();
    }
    println!("eval_interval exp(5x)@4400bits: {:?}/call", t0.elapsed() / 10);
}
