use proptest::prelude::*;
use toric_core::padic::{PadicConfig, PadicNumber};

fn cfg(p: u32, n: u32) -> PadicConfig {
    PadicConfig::new(p, n).unwrap()
}

fn pow_i128(p: i128, e: u32) -> i128 {
    (0..e).fold(1, |acc, _| acc * p)
}

/// Valuation and unit residue of a/b computed with plain i128 arithmetic.
fn oracle(a: i64, b: i64, p: i128, n: u32) -> (i64, i128) {
    let (mut a, mut b) = (a as i128, b as i128);
    let mut v = 0i64;
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    while b % p == 0 {
        b /= p;
        v -= 1;
    }
    let m = pow_i128(p, n);
    let inv = (1..m).find(|t| (b.rem_euclid(m) * t) % m == 1).unwrap();
    (v, (a.rem_euclid(m) * inv) % m)
}

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-3000i64..=-1, 1i64..=3000]
}

fn element(c: &PadicConfig, a: i64, b: i64) -> PadicNumber {
    c.rational(a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rationals_match_modular_oracle(a in nonzero(), b in nonzero(), p in prop::sample::select(vec![3u32, 5, 7])) {
        let n = 4;
        let c = cfg(p, n);
        let x = element(&c, a, b);
        let (v, u) = oracle(a, b, p as i128, n);
        prop_assert_eq!(x.valuation(), Some(v));
        prop_assert_eq!(x.unit().unwrap().to_string(), u.to_string());
    }

    #[test]
    fn ring_laws(a in nonzero(), b in nonzero(), c0 in nonzero(), d in nonzero()) {
        let c = cfg(5, 20);
        let (x, y, z) = (element(&c, a, b), element(&c, c0, d), element(&c, b, a));
        let digits = c.check_digits();
        prop_assert!((&x * &y).approx_eq(&(&y * &x), digits));
        prop_assert!((&(&x + &y) + &z).approx_eq(&(&x + &(&y + &z)), digits));
        prop_assert!((&x * &(&y + &z)).approx_eq(&(&(&x * &y) + &(&x * &z)), digits));
        prop_assert!((&x * &x.inverse().unwrap()).is_one_to(digits));
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn log_is_a_homomorphism(a in nonzero(), b in nonzero(), c0 in nonzero(), d in nonzero()) {
        let c = cfg(7, 16);
        let (x, y) = (element(&c, a, b), element(&c, c0, d));
        let lhs = (&x * &y).iwasawa_log().unwrap();
        let rhs = &x.iwasawa_log().unwrap() + &y.iwasawa_log().unwrap();
        prop_assert!(lhs.approx_eq(&rhs, c.check_digits() - 1));
    }

    #[test]
    fn display_parse_round_trip(a in nonzero(), b in nonzero()) {
        let c = cfg(5, 12);
        let x = element(&c, a, b);
        let y = c.parse(&x.to_string()).unwrap();
        prop_assert_eq!(x.to_string(), y.to_string());
    }

    #[test]
    fn teichmuller_is_a_root_of_unity(a in 1i64..10_000) {
        let c = cfg(5, 10);
        let x = c.int(a * 5 + 2);
        let w = x.teichmuller().unwrap();
        prop_assert!(w.pow(4).unwrap().is_one_to(10));
        prop_assert!((&w - &x).valuation().unwrap_or(i64::MAX) >= 1);
    }
}

#[test]
fn spec_style_examples() {
    let c = cfg(5, 8);
    let x = c.rational(75, 2);
    assert_eq!(x.valuation(), Some(2));
    assert!((&x * &c.rational(2, 75)).is_one_to(8));
    let c = cfg(5, 4);
    assert_eq!(c.rational(1, 3).unit().unwrap().to_string(), "417");
    assert!(c.rational(0, 7).is_exact_zero());
    let c3 = cfg(3, 6);
    assert_eq!(c3.int(2).teichmuller().unwrap().to_string(), c3.int(-1).to_string());
}
