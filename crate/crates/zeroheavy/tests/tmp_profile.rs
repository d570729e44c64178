use zeroheavy::oracle::parse;
use zeroheavy::rational::ratio;
use zeroheavy::zigzag::run_family;
use zeroheavy::RationalInterval;

#[test]
#[ignore]
fn profile_family() {
    let fs: Vec<_> = ["exp(x)", "exp(2*x)", "exp(3*x)", "exp(1/2*x)", "exp(5*x)"]
        .iter()
        .map(|s| parse(s).unwrap())
        .collect();
    let dom = RationalInterval::new(ratio(0, 1), ratio(1, 1)).unwrap();
    let res = run_family(&fs, &dom, 10, 60).unwrap();
    assert!(res.complete);
}
