use std::sync::atomic::Ordering;
use zeroheavy::elementary::KERNEL_CALLS;
use zeroheavy::oracle::{self, parse};
use zeroheavy::rational::Rational;
use num_bigint::BigInt;

#[test]
#[ignore]
fn split_eval_cost() {
    let num: BigInt = (BigInt::from(123456789u64).pow(200) % (BigInt::from(1) << 4400)) | BigInt::from(1);
    let x = Rational::new(num, BigInt::from(1) << 4402) + Rational::new(BigInt::from(1), BigInt::from(2));
    let f = parse("exp(5*x)").unwrap();
    let t0 = std::time::Instant::now();
    let n = 20;
    for _ in 0..n {
        let _ = oracle::eval_point_bits(&f, &x, 4400).unwrap();
    }
    let total = t0.elapsed();
    println!(
        "eval total {:?}/call, kernel calls {}",
        total / n,
        KERNEL_CALLS.load(Ordering::Relaxed),
    );
}
