use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use vosa_core::cyclotomic::{cyc_arith, cyc_root, cyc_sqrt2, CycOp, CyclotomicField, CyclotomicNumber};

// floating embedding zeta_n -> exp(2 pi i / n), diagnostic only
fn embed(x: &CyclotomicNumber) -> (f64, f64) {
    let n = x.order() as f64;
    let mut re = 0.0;
    let mut im = 0.0;
    for (j, c) in x.coords().iter().enumerate() {
        let v = c.to_f64().unwrap();
        let t = 2.0 * std::f64::consts::PI * j as f64 / n;
        re += v * t.cos();
        im += v * t.sin();
    }
    (re, im)
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn close(a: (f64, f64), b: (f64, f64)) -> bool {
    (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9
}

#[test]
fn small_roots() {
    let i = cyc_root(4, 1);
    assert_eq!(&i * &i, CyclotomicField::new(4).int(-1));
    let z = cyc_root(8, 1);
    assert_eq!(z.pow(4).unwrap(), CyclotomicField::new(8).int(-1));
    let s = &cyc_root(8, 1) + &cyc_root(8, -1);
    assert_eq!(&s * &s, CyclotomicField::new(8).int(2));
}

#[test]
fn arith_examples() {
    let f = CyclotomicField::new(4);
    let i = f.i().unwrap();
    let a = &f.one() + &i;
    let b = &f.one() - &i;
    assert_eq!(&a * &b, f.int(2));
    let q = cyc_arith(&f.one(), &a, CycOp::Div).unwrap();
    assert_eq!(q, &b * &f.ratio(1, 2));
    assert!(cyc_arith(&f.one(), &f.zero(), CycOp::Div).is_err());
}

#[test]
fn sqrt2_forms() {
    let s8 = cyc_sqrt2(8).unwrap();
    assert_eq!(s8, &cyc_root(8, 1) + &cyc_root(8, 7));
    assert_eq!(&s8 * &s8, CyclotomicField::new(8).int(2));
    let s16 = cyc_sqrt2(16).unwrap();
    assert_eq!(s16, &cyc_root(16, 2) + &cyc_root(16, 14));
    assert!(cyc_sqrt2(12).is_err());
    assert!(embed(&s8).0 > 0.0);
}

#[test]
fn embedding_between_orders() {
    let i4 = cyc_root(4, 1);
    let z8 = cyc_root(8, 1);
    // zeta_8^2 = i across orders
    assert_eq!(&z8 * &z8, i4.clone());
    assert_eq!(&(&z8 * &z8) - &i4, CyclotomicField::new(8).zero());
    let z3 = cyc_root(3, 1);
    assert!(z3.checked_add(&i4).is_err());
    assert_eq!(z3.embed(&CyclotomicField::new(12)).unwrap(), cyc_root(12, 4));
}

#[test]
fn root_products_exhaustive() {
    for n in 1..=24u32 {
        let f = CyclotomicField::new(n);
        for j in 0..n as i64 {
            for k in 0..n as i64 {
                assert_eq!(&f.root(j) * &f.root(k), f.root(j + k), "n={n} j={j} k={k}");
            }
        }
    }
}

#[test]
fn text_form() {
    let f = CyclotomicField::new(4);
    let x = &f.ratio(1, 2) + &f.i().unwrap().scale_int(-3);
    assert_eq!(x.to_text(), "1/2 + -3*z (z = zeta_4)");
    assert_eq!(f.zero().to_text(), "0 (z = zeta_4)");
}

fn arb(n: u32) -> impl Strategy<Value = CyclotomicNumber> {
    let f = CyclotomicField::new(n);
    prop::collection::vec((-6i64..6, 1i64..5), f.degree()).prop_map(move |cs| {
        let mut acc = f.zero();
        for (j, (p, q)) in cs.into_iter().enumerate() {
            let c = BigRational::new(BigInt::from(p), BigInt::from(q));
            acc += &f.root(j as i64).scale(&c);
        }
        acc
    })
}

fn field_axioms(a: CyclotomicNumber, b: CyclotomicNumber, c: CyclotomicNumber) -> Result<(), TestCaseError> {
    prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    prop_assert_eq!(&a * &b, &b * &a);
    if !a.is_zero() {
        let inv = a.inverse().unwrap();
        prop_assert!((&a * &inv).is_one());
    }
    prop_assert!(close(embed(&(&a * &b)), cmul(embed(&a), embed(&b))));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn field_axioms_4(a in arb(4), b in arb(4), c in arb(4)) { field_axioms(a, b, c)?; }
    #[test]
    fn field_axioms_8(a in arb(8), b in arb(8), c in arb(8)) { field_axioms(a, b, c)?; }
    #[test]
    fn field_axioms_24(a in arb(24), b in arb(24), c in arb(24)) { field_axioms(a, b, c)?; }
}
