use num_rational::Rational64;
use toric_core::graph::{self, Graph};
use toric_core::mumford::{
    hurewicz, padic_sqrt, period, period_matrix, residue_matches_hurewicz, tate_group, two_axis_group, LiftData,
    ProjPoint, ThetaPoints,
};
use toric_core::padic::PadicConfig;
use toric_core::regulators::{
    k1_orientation_change_check, k1_tate_toy, k2_regulator, k2_tate_regulator, tate_torsion_symbol,
    AnnulusDecomposedCurve, K2Input,
};
use toric_core::report::Status;
use toric_core::symbols::{rat, Annulus, SplitRationalFunction, SymbolElement};

fn cfg(p: u32, n: u32, slack: u32) -> PadicConfig {
    PadicConfig::new(p, n).unwrap().with_slack(slack).unwrap()
}

fn points(c: &PadicConfig) -> (ThetaPoints, [ProjPoint; 2]) {
    (
        ThetaPoints {
            x: ProjPoint::affine(c.int(2)),
            z0: ProjPoint::affine(c.int(3)),
        },
        [ProjPoint::affine(c.rational(11, 3)), ProjPoint::affine(c.rational(13, 2))],
    )
}

#[test]
fn tate_period_is_q() {
    for p in [5u32, 7] {
        let c = cfg(p, 20, 3);
        let q = &c.int((p * p) as i64) * &c.int(1 + p as i64);
        let (pts, z) = points(&c);
        let pv = period(&tate_group(&c, &q).unwrap(), &[(0, 1)], &[(0, 1)], &pts, &z).unwrap();
        assert!(pv.stabilized && pv.length <= 64);
        assert!(pv.value.approx_eq(&q, c.check_digits()));
    }
}

fn rank_two_quotient() -> (Graph, LiftData, Vec<Annulus>, PadicConfig) {
    let c = cfg(5, 12, 3);
    let g = Graph::from_indices(3, &[(0, 1), (1, 0), (0, 2), (2, 0)]);
    let lifts = LiftData {
        base: 0,
        paths: vec![vec![(0, 1), (1, 1)], vec![(2, 1), (3, 1)]],
    };
    let at = |c0: i64, a: i64, b: i64| {
        Annulus::new(c.int(c0), Rational64::from_integer(a), Rational64::from_integer(b)).unwrap()
    };
    let charts = vec![at(0, 0, 1), at(0, 1, 2), at(1, 0, 1), at(1, 1, 2)];
    (g, lifts, charts, c)
}

#[test]
fn rank_two_periods_are_symmetric() {
    let (g, lifts, charts, c) = rank_two_quotient();
    let grp = two_axis_group(&c, &c.int(25), &c.int(25)).unwrap();
    let (pts, z) = points(&c);
    let q = period_matrix(&grp, &pts, &z).unwrap();
    assert!(q.asymmetry(c.check_digits()).is_none());
    let cycles: Vec<Vec<i128>> = (0..2).map(|i| hurewicz(&g, &lifts, &[(i, 1)]).unwrap()).collect();
    assert_eq!(q.val_matrix().unwrap(), graph::cycle_pairing_matrix(&cycles));
    for gen in 0..2 {
        for e in [1i8, -1] {
            residue_matches_hurewicz(&grp, &g, &lifts, &[(gen, e)], &pts.x, &charts, 3).unwrap();
        }
    }
}

#[test]
fn k2_tate_regulator_is_harmonic() {
    let c = cfg(5, 12, 3);
    let q = c.int(25);
    let curve = AnnulusDecomposedCurve::tate(&c, &q).unwrap();
    let i = padic_sqrt(&c.int(-1), &c).unwrap();
    let a = tate_torsion_symbol(&c, &q, &i, &c.int(-1), 4);
    let b = tate_torsion_symbol(&c, &q, &c.int(5), &(&i * &c.int(5)), 4);
    let (ra, rb) = (
        k2_tate_regulator(&c, &curve, &a).unwrap(),
        k2_tate_regulator(&c, &curve, &b).unwrap(),
    );
    let rab = k2_tate_regulator(&c, &curve, &a.concat(&b)).unwrap();
    for e in 0..2 {
        assert!(ra.cochain[e].approx_eq(&ra.cochain[0], c.check_digits()));
        assert!(rab.cochain[e].approx_eq(&(&ra.cochain[e] * &rb.cochain[e]), c.check_digits()));
    }
    assert!(!ra.cochain[0].is_one_to(c.check_digits()));
}

#[test]
fn steinberg_symbol_on_a_disc_curve_is_trivial() {
    let c = cfg(7, 16, 2);
    let g = Graph::new(vec!["in".into(), "out".into()], vec![("e".into(), "out".into(), "in".into())]).unwrap();
    let curve = AnnulusDecomposedCurve::new(g, vec![Annulus::new(c.int(0), rat(0, 1), rat(1, 1)).unwrap()]).unwrap();
    // f = 3(z - 7)/(z - 49) and 1 - f = -2(z + 14)/(z - 49)
    let f = SplitRationalFunction::new(c.int(3), vec![(c.int(7), 1), (c.int(49), -1)]).unwrap();
    let one_minus_f = SplitRationalFunction::new(c.int(-2), vec![(c.int(-14), 1), (c.int(49), -1)]).unwrap();
    let x = c.rational(3, 11);
    let lhs = &c.int(1) - &f.eval(&x).unwrap();
    assert!(lhs.approx_eq(&one_minus_f.eval(&x).unwrap(), 14));
    let input = K2Input::global(SymbolElement::new(vec![(f, one_minus_f, 1)]));
    let reg = k2_regulator(&curve, &input, &c).unwrap();
    assert!(reg.cochain[0].is_one_to(c.check_digits()));
}

#[test]
fn k1_flip_is_resolved_on_the_toy() {
    let c = cfg(5, 12, 3);
    let input = k1_tate_toy(&c, vec![vec![1, 1], vec![2, 2]], 8).unwrap();
    assert_eq!(k1_orientation_change_check(&input, &c, 0, 5).unwrap().status, Status::Pass);
}
