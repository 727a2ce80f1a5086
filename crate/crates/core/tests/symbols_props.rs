use proptest::prelude::*;
use toric_core::padic::{PadicConfig, PadicNumber};
use toric_core::symbols::{annulus_degree, annulus_symbol, rat, residue_theorem_check, tame_symbol, Annulus, Point, SplitRationalFunction};

const N: u32 = 20;

fn cfg() -> PadicConfig {
    PadicConfig::new(5, N).unwrap()
}

/// Roots `c + 5^k u` with `c` in 0..3 and `k` in 0..=2.
fn root() -> impl Strategy<Value = (i64, u32, i64)> {
    (0i64..3, 0u32..3, 1i64..124).prop_filter("unit", |(_, _, u)| u % 5 != 0)
}

/// Leading constant and `(root, multiplicity)` pairs.
type Spec = (i64, Vec<((i64, u32, i64), i64)>);

fn function() -> impl Strategy<Value = Spec> {
    (
        prop_oneof![Just(1i64), Just(2), Just(3), Just(-7), Just(10)],
        proptest::collection::vec((root(), prop_oneof![Just(-2i64), Just(-1), Just(1), Just(2)]), 1..4),
    )
}

fn roots(f: &Spec) -> Vec<i64> {
    f.1.iter().map(|&((c0, e, u), _)| c0 + 5i64.pow(e) * u).collect()
}

/// Distinct roots have `v(r - s) <= 2`, so that differences keep `N - 2`
/// digits of relative precision; roots may be shared between functions but
/// not repeated within one.
fn spread(fs: &[&Spec]) -> bool {
    let own = fs.iter().all(|f| {
        let r = roots(f);
        r.iter().enumerate().all(|(i, a)| !r[i + 1..].contains(a))
    });
    let all: Vec<i64> = fs.iter().flat_map(|f| roots(f)).collect();
    own && all
        .iter()
        .enumerate()
        .all(|(i, a)| all[i + 1..].iter().all(|b| a == b || (a - b) % 125 != 0))
}

fn build(c: &PadicConfig, (k, roots): &Spec) -> SplitRationalFunction {
    let div: Vec<(PadicNumber, i64)> = roots
        .iter()
        .map(|&((c0, e, u), m)| (&c.int(c0) + &(&c.int(5i64.pow(e)) * &c.int(u)), m))
        .collect();
    SplitRationalFunction::new(c.int(*k), div).unwrap()
}

fn annulus() -> impl Strategy<Value = Annulus> {
    (0i64..3, 0i64..=1, 1i64..=2, any::<bool>()).prop_map(|(c0, a, w, rev)| {
        let c = cfg();
        let e = Annulus::new(c.int(c0), rat(a, 1), rat(a + w, 1)).unwrap();
        if rev { e.reversed() } else { e }
    })
}

/// `None` when a root lies in the open annulus; such cases are discarded.
fn sym(f: &SplitRationalFunction, g: &SplitRationalFunction, e: &Annulus) -> Option<PadicNumber> {
    annulus_symbol(f, g, e).ok()
}

fn close(x: &PadicNumber, y: &PadicNumber) -> bool {
    x.approx_eq(y, N - 2) && x.relative_precision().unwrap_or(0) >= N - 2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn antisymmetric_and_orientation(f in function(), g in function(), e in annulus()) {
        prop_assume!(spread(&[&f, &g]));
        let c = cfg();
        let (f, g) = (build(&c, &f), build(&c, &g));
        let t = sym(&f, &g, &e);
        prop_assume!(t.is_some());
        let t = t.unwrap();
        let s = sym(&g, &f, &e).unwrap();
        prop_assert!(close(&(&t * &s), &c.int(1)));
        let r = sym(&f, &g, &e.reversed()).unwrap();
        prop_assert!(close(&(&t * &r), &c.int(1)));
    }

    #[test]
    fn bimultiplicative(f1 in function(), f2 in function(), g in function(), e in annulus()) {
        prop_assume!(spread(&[&f1, &f2, &g]));
        let c = cfg();
        let (f1, f2, g) = (build(&c, &f1), build(&c, &f2), build(&c, &g));
        let (a, b) = (sym(&f1, &g, &e), sym(&f2, &g, &e));
        prop_assume!(a.is_some() && b.is_some());
        let lhs = sym(&f1.mul(&f2).unwrap(), &g, &e).unwrap();
        let rhs = &a.unwrap() * &b.unwrap();
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn constants_give_degree_powers(f in function(), k in prop_oneof![Just(2i64), Just(3), Just(-6), Just(5), Just(25)], e in annulus()) {
        prop_assume!(spread(&[&f]));
        let c = cfg();
        let f = build(&c, &f);
        let a = c.int(k);
        let t = sym(&SplitRationalFunction::constant(a.clone()).unwrap(), &f, &e);
        prop_assume!(t.is_some());
        let t = t.unwrap();
        let d = annulus_degree(&f, &e).unwrap();
        prop_assert!(close(&t, &a.pow(d).unwrap()));
    }

    #[test]
    fn residue_theorem(f in function(), g in function(), b in 1i64..=3) {
        prop_assume!(spread(&[&f, &g]));
        let c = cfg();
        let (f, g) = (build(&c, &f), build(&c, &g));
        let discs: Vec<Annulus> = (0..3)
            .map(|c0| Annulus::new(c.int(c0), rat(b - 1, 1), rat(b, 1)).unwrap())
            .collect();
        let prod = residue_theorem_check(&f, &g, &discs).unwrap();
        prop_assert!(close(&prod, &c.int(1)));
    }
}

#[test]
fn tame_symbol_examples() {
    let c = cfg();
    let z = SplitRationalFunction::z(&c);
    let one = SplitRationalFunction::constant(c.int(1)).unwrap();
    assert!(tame_symbol(&z, &one, &Point::Finite(c.int(0))).unwrap().is_one_to(N));
    // t_inf(z, z) = -1
    let t = tame_symbol(&z, &z, &Point::Infinity).unwrap();
    assert!(t.approx_eq(&c.int(-1), N));
    // one disc around 0 with f = z, g = z - 1: 1 * (-1) * (-1)
    let g = SplitRationalFunction::linear(&c, c.int(1));
    let disc = Annulus::new(c.int(0), rat(0, 1), rat(1, 1)).unwrap();
    assert!(residue_theorem_check(&z, &g, &[disc]).unwrap().is_one_to(N - 1));
}
