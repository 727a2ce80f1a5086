//! Property checks across all modules, aggregated into one report.
//!
//! Checks run in parallel; the report is sorted by check name so it is
//! identical for any thread count.

use rand::Rng;
use rayon::prelude::*;
use toric_core::error::Result;
use toric_core::graph;
use toric_core::mumford::{
    augmented_monodromy_from_periods, format_word, hurewicz, padic_sqrt, period, period_matrix,
    residue_matches_hurewicz, tate_group, ProjPoint, ThetaPoints,
};
use toric_core::padic::{PadicConfig, PadicNumber};
use toric_core::regulators::{
    k1_normalization_invariance_check, k1_orientation_change_check, k1_tate_toy, k2_tate_regulator,
    log_identity_holds, tate_torsion_symbol, AnnulusDecomposedCurve, TateK2Input,
};
use toric_core::report::{CheckLine, Status};
use toric_core::symbols::{annulus_degree, annulus_symbol, residue_theorem_check, Annulus, SplitRationalFunction};
use toric_core::weight::{self, jacobian_reduce, jacobian_valuation, toric_jacobian};

use crate::corpus;

/// Counts cases of one law and the least relative precision seen.
struct Tally {
    name: String,
    digits: u32,
    total: usize,
    failed: usize,
    min_prec: u32,
    first_failure: Option<String>,
    note: String,
}

impl Tally {
    fn new(name: impl Into<String>, digits: u32) -> Self {
        Tally {
            name: name.into(),
            digits,
            total: 0,
            failed: 0,
            min_prec: u32::MAX,
            first_failure: None,
            note: String::new(),
        }
    }

    /// Records whether `x` is 1 to the required digits.
    fn one(&mut self, x: &PadicNumber, what: impl FnOnce() -> String) {
        self.total += 1;
        self.min_prec = self.min_prec.min(x.relative_precision().unwrap_or(0));
        if !x.is_one_to(self.digits) {
            self.fail(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.failed += 1;
        self.first_failure.get_or_insert(what);
    }

    fn error(&mut self, e: toric_core::error::Error) {
        self.total += 1;
        self.fail(format!("error: {e}"));
    }

    fn line(self) -> CheckLine {
        let prec_ok = self.min_prec == u32::MAX || self.min_prec >= self.digits;
        let mut detail = format!("{}/{} cases", self.total - self.failed, self.total);
        if self.min_prec != u32::MAX {
            detail.push_str(&format!(", min precision {} >= {}", self.min_prec, self.digits));
        }
        detail.push_str(&self.note);
        if let Some(f) = &self.first_failure {
            detail.push_str(&format!(", first failure: {f}"));
        } else if !prec_ok {
            detail = detail.replace(">=", "<");
        }
        CheckLine::from_bool(self.name, self.failed == 0 && prec_ok && self.total > 0, detail)
    }
}

fn guard(name: &str, r: Result<CheckLine>) -> CheckLine {
    r.unwrap_or_else(|e| CheckLine::fail(name, format!("error: {e}")))
}

fn config(p: u32, n: u32, slack: u32) -> PadicConfig {
    PadicConfig::new(p, n)
        .and_then(|c| c.with_slack(slack))
        .expect("valid built-in configuration")
}

/// Curve pipeline against graph cohomology on the graph corpus.
pub fn graph_t_groups() -> Vec<CheckLine> {
    corpus::graph_corpus()
        .into_iter()
        .flat_map(|(name, g)| {
            let cmp = guard(
                &format!("graph-t.match[{name}]"),
                weight::compare_curve_t_with_graph(&g).map(|t| {
                    CheckLine::pass(
                        format!("graph-t.match[{name}]"),
                        format!("rank {} = cycle rank {}", t.t_harm.free_rank, g.cycle_rank()),
                    )
                }),
            );
            let iso = guard(
                &format!("graph-t.isogeny[{name}]"),
                weight::verify_n_isogeny(&weight::curve_chow_data(&g), 1, 0)
                    .map(|r| {
                        let detail = format!("ranks {} -> {}, image rank {}", r.source_rank, r.target_rank, r.map_rank);
                        CheckLine::from_bool(format!("graph-t.isogeny[{name}]"), r.passed(), detail)
                    }),
            );
            vec![cmp, iso]
        })
        .collect()
}

/// Bimultiplicativity, antisymmetry, orientation, degree lemma and residue
/// theorem on random split configurations at N = 20.
pub fn symbol_laws() -> Vec<CheckLine> {
    let mut out = Vec::new();
    for (stream, p) in [(2u64, 5u32), (3, 7)] {
        let cfg = config(p, 20, 2);
        let digits = cfg.check_digits();
        let mut r = corpus::rng(stream);
        let mut laws = [
            Tally::new(format!("symbols.antisymmetry[p={p}]"), digits),
            Tally::new(format!("symbols.bimultiplicative[p={p}]"), digits),
            Tally::new(format!("symbols.degree-lemma[p={p}]"), digits),
            Tally::new(format!("symbols.orientation[p={p}]"), digits),
            Tally::new(format!("symbols.residue-theorem[p={p}]"), digits),
        ];
        let mut nontrivial = 0;
        for case in 0..100 {
            let e = corpus::random_annulus(&mut r, &cfg);
            let pool = corpus::random_root_pool(&mut r, &cfg, std::slice::from_ref(&e), 8);
            let f1 = corpus::random_split_function(&mut r, &cfg, &pool);
            let f2 = corpus::random_split_function(&mut r, &cfg, &pool);
            let g = corpus::random_split_function(&mut r, &cfg, &pool);
            let c = corpus::random_element(&mut r, &cfg, -1, 1);
            let res: Result<()> = (|| {
                let t = |a: &SplitRationalFunction, b: &SplitRationalFunction, e: &Annulus| annulus_symbol(a, b, e);
                let lhs = t(&f1.mul(&f2)?, &g, &e)?;
                let rhs = &t(&f1, &g, &e)? * &t(&f2, &g, &e)?;
                laws[1].one(&lhs.try_div(&rhs)?, || format!("case {case}"));
                if !rhs.is_one_to(digits) {
                    nontrivial += 1;
                }
                laws[0].one(&(&t(&f1, &g, &e)? * &t(&g, &f1, &e)?), || format!("case {case}"));
                laws[3].one(&(&t(&f1, &g, &e)? * &t(&f1, &g, &e.reversed())?), || format!("case {case}"));
                let cf = SplitRationalFunction::constant(c.clone())?;
                let expect = c.pow(annulus_degree(&g, &e)?)?;
                laws[2].one(&t(&cf, &g, &e)?.try_div(&expect)?, || format!("case {case}"));
                Ok(())
            })();
            if let Err(err) = res {
                laws[0].error(err);
            }
            let boundary = random_boundary(&mut r, &cfg);
            let pool = corpus::random_root_pool(&mut r, &cfg, &boundary, 8);
            let f = corpus::random_split_function(&mut r, &cfg, &pool);
            let g = corpus::random_split_function(&mut r, &cfg, &pool);
            match residue_theorem_check(&f, &g, &boundary) {
                Ok(x) => laws[4].one(&x, || format!("case {case}")),
                Err(err) => laws[4].error(err),
            }
        }
        for law in laws.iter_mut().take(4) {
            law.note = format!(", {nontrivial} with a nontrivial symbol");
        }
        out.extend(laws.into_iter().map(Tally::line));
    }
    out
}

/// Three disjoint discs `{v(z - c) >= b}` around 0, 1, 2 with `b` in 1..=3.
fn random_boundary(r: &mut impl Rng, cfg: &PadicConfig) -> Vec<Annulus> {
    (0..3)
        .map(|c| {
            let b = r.gen_range(1..=3);
            Annulus::new(
                cfg.int(c),
                num_rational::Rational64::from_integer(b - 1),
                num_rational::Rational64::from_integer(b),
            )
            .expect("a < b")
        })
        .collect()
}

/// `t_e(f, 1 - f) = 1` for `f = w^n`, `w = k (z - a)/(z - b)`, `n | p - 1`,
/// with `1 - f = prod_zeta (1 - zeta w)` split over Teichmuller roots.
pub fn steinberg() -> Vec<CheckLine> {
    let mut out = Vec::new();
    for (stream, p) in [(4u64, 5u32), (5, 7)] {
        let cfg = config(p, 20, 2);
        let mut tally = Tally::new(format!("symbols.steinberg[p={p}]"), cfg.check_digits());
        let mut r = corpus::rng(stream);
        let divisors: Vec<u32> = (1..p).filter(|d| (p - 1) % d == 0).collect();
        let mut made = 0;
        while made < 12 {
            let n = divisors[r.gen_range(0..divisors.len())];
            let e = corpus::random_annulus(&mut r, &cfg);
            match steinberg_pair(&mut r, &cfg, n, &e) {
                Ok(Some((f, g))) => {
                    made += 1;
                    match annulus_symbol(&f, &g, &e) {
                        Ok(x) => tally.one(&x, || format!("n = {n}, f = {}", f.to_json_value())),
                        Err(err) => tally.error(err),
                    }
                }
                Ok(None) => continue,
                Err(err) => {
                    made += 1;
                    tally.error(err);
                }
            }
        }
        out.push(tally.line());
    }
    out
}

/// Builds `(f, 1 - f)` or `None` when the draw is degenerate or not
/// invertible on `e`. Also checks `g(x0) = 1 - f(x0)` at a sample point.
fn steinberg_pair(
    r: &mut impl Rng,
    cfg: &PadicConfig,
    n: u32,
    e: &Annulus,
) -> Result<Option<(SplitRationalFunction, SplitRationalFunction)>> {
    let pool = corpus::random_root_pool(r, cfg, std::slice::from_ref(e), 2);
    let (a, b) = (pool[0].clone(), pool[1].clone());
    let k = corpus::random_element(r, cfg, 0, 0);
    let p = cfg.prime as i64;
    let zetas: Vec<PadicNumber> = (1..p)
        .filter(|x| {
            let mut y = 1i64;
            for _ in 0..n {
                y = y * x % p;
            }
            y == 1
        })
        .map(|x| cfg.int(x).teichmuller())
        .collect::<Result<_>>()?;
    let one = cfg.int(1);
    let mut constant = one.clone();
    let mut roots = vec![(b.clone(), -(n as i64))];
    for z in &zetas {
        let zk = z * &k;
        let d = &one - &zk;
        if d.valuation() != Some(0) {
            return Ok(None);
        }
        let root = (&b - &(&zk * &a)).try_div(&d)?;
        let bad = roots.iter().chain([(a.clone(), 0)].iter()).any(|(x, _)| {
            (&root - x).valuation().is_none_or(|v| v > 2)
        });
        if bad || e.side(&toric_core::symbols::Point::Finite(root.clone()))? == toric_core::symbols::Side::Open {
            return Ok(None);
        }
        constant = &constant * &d;
        roots.push((root, 1));
    }
    let f = SplitRationalFunction::new(k.pow(n as i64)?, vec![(a, n as i64), (b, -(n as i64))])?;
    let g = SplitRationalFunction::new(constant, roots)?;
    let x0 = cfg.rational(3, 7 + 5 * p);
    let check = &one - &f.eval(&x0)?;
    if !check.approx_eq(&g.eval(&x0)?, cfg.check_digits()) {
        return Err(toric_core::error::Error::InconsistentData("1 - f does not factor as built".into()));
    }
    Ok(Some((f, g)))
}

fn theta_points(cfg: &PadicConfig) -> (ThetaPoints, [ProjPoint; 2]) {
    (
        ThetaPoints {
            x: ProjPoint::affine(cfg.int(2)),
            z0: ProjPoint::affine(cfg.int(3)),
        },
        [ProjPoint::affine(cfg.rational(11, 3)), ProjPoint::affine(cfg.rational(13, 2))],
    )
}

/// `mu(g, g) = q` for the Tate group, and reduction modulo `q^Z`.
pub fn tate_periods() -> Vec<CheckLine> {
    let mut out = Vec::new();
    for p in [5u32, 7] {
        let cfg = config(p, 20, 3);
        let pi = cfg.int(p as i64);
        let qs = [
            ("p", pi.clone()),
            ("p^2", &pi * &pi),
            ("p^3(1+p)", &(&(&pi * &pi) * &pi) * &(&cfg.int(1) + &pi)),
        ];
        for (label, q) in qs {
            let name = format!("mumford.tate-period[p={p},q={label}]");
            out.push(guard(&name, (|| {
                let grp = tate_group(&cfg, &q)?;
                let (pts, z) = theta_points(&cfg);
                let pv = period(&grp, &[(0, 1)], &[(0, 1)], &pts, &z)?;
                let ok = pv.stabilized && pv.length <= 64 && pv.value.approx_eq(&q, cfg.check_digits());
                Ok(CheckLine::from_bool(
                    &name,
                    ok,
                    format!("stabilized at L = {}, mu = {}", pv.length, pv.value),
                ))
            })()));
            let name = format!("weight.tate-reduction[p={p},q={label}]");
            out.push(guard(&name, (|| {
                let jac = toric_jacobian(&cfg, 1, vec![vec![q.clone()]])?;
                let mut r = corpus::rng(6 + p as u64);
                let mut tally = Tally::new(&name, cfg.check_digits());
                for case in 0..50 {
                    let x = corpus::random_element(&mut r, &cfg, -6, 6);
                    let a = jacobian_reduce(&jac, std::slice::from_ref(&x))?;
                    let b = jacobian_reduce(&jac, &[&q * &x])?;
                    tally.one(&a.normal_form[0].try_div(&b.normal_form[0])?, || format!("case {case}"));
                    if b.witness[0] != a.witness[0] + 1 {
                        tally.fail(format!("case {case}: witness {} vs {}", b.witness[0], a.witness[0]));
                    }
                }
                Ok(tally.line())
            })()));
        }
    }
    out
}

/// Rank-2 model: symmetric period matrix with `val(Q)` the cycle pairing of
/// the quotient graph.
pub fn rank_two_periods() -> Vec<CheckLine> {
    let name = "mumford.rank-two-periods[p=5,q=25,25]";
    vec![guard(name, (|| {
        let cfg = config(5, 12, 3);
        let m = corpus::rank_two_model(&cfg, &cfg.int(25), &cfg.int(25))?;
        let (pts, z) = theta_points(&cfg);
        let q = period_matrix(&m.group, &pts, &z)?;
        let cycles: Vec<Vec<i128>> = (0..2)
            .map(|i| hurewicz(&m.quotient, &m.lifts, &[(i, 1)]))
            .collect::<Result<_>>()?;
        let gram = graph::cycle_pairing_matrix(&cycles);
        let val = q.val_matrix()?;
        let symmetric = q.asymmetry(cfg.check_digits()).is_none();
        let augmented = augmented_monodromy_from_periods(&q, &cfg).is_ok();
        Ok(CheckLine::from_bool(
            name,
            symmetric && augmented && val == gram,
            format!(
                "symmetric to {} digits: {symmetric}, val(Q) = {:?}, cycle pairing = {:?}",
                cfg.check_digits(),
                val.to_rows(),
                gram.to_rows()
            ),
        ))
    })())]
}

/// Residues of truncated theta functions against the Hurewicz map.
pub fn hurewicz_residues() -> Vec<CheckLine> {
    let mut out = Vec::new();
    let cfg = config(5, 12, 3);
    let x = ProjPoint::affine(cfg.int(2));
    let name = "mumford.residues[rank=1]";
    out.push(guard(name, (|| {
        let m = corpus::rank_one_model(&cfg, &cfg.int(25))?;
        let mut words = Vec::new();
        for k in [-3i8, -2, -1, 1, 2, 3] {
            let w: Vec<(usize, i8)> = vec![(0, k.signum()); k.unsigned_abs() as usize];
            residue_matches_hurewicz(&m.group, &m.quotient, &m.lifts, &w, &x, &m.charts, 4)?;
            words.push(format_word(&w));
        }
        Ok(CheckLine::pass(name, format!("{} words of length <= 3", words.len())))
    })()));
    let name = "mumford.residues[rank=2]";
    out.push(guard(name, (|| {
        let m = corpus::rank_two_model(&cfg, &cfg.int(25), &cfg.int(25))?;
        let mut n = 0;
        for g in 0..2 {
            for e in [1i8, -1] {
                residue_matches_hurewicz(&m.group, &m.quotient, &m.lifts, &[(g, e)], &x, &m.charts, 3)?;
                n += 1;
            }
        }
        Ok(CheckLine::pass(name, format!("{n} generators and inverses")))
    })()));
    out
}

/// K_2 regulator on the Tate model with `v(q) = 2`.
pub fn k2_tate() -> Vec<CheckLine> {
    let cfg = config(5, 12, 3);
    let q = cfg.int(25);
    let digits = cfg.check_digits();
    let setup = || -> Result<(AnnulusDecomposedCurve, Vec<(String, TateK2Input)>)> {
        let curve = AnnulusDecomposedCurve::tate(&cfg, &q)?;
        let i = padic_sqrt(&cfg.int(-1), &cfg)?;
        let five = cfg.int(5);
        let pts = [
            ("-1", cfg.int(-1), 2),
            ("5", five.clone(), 2),
            ("i", i.clone(), 4),
            ("-i", -&i, 4),
            ("5i", &i * &five, 4),
            ("-5i", -&(&i * &five), 4),
        ];
        let pairs = [(0, 1), (2, 0), (2, 1), (3, 4), (1, 5), (4, 2)];
        let inputs = pairs
            .iter()
            .map(|&(a, b)| {
                let n = pts[a].2.max(pts[b].2);
                (
                    format!("{},{}", pts[a].0, pts[b].0),
                    tate_torsion_symbol(&cfg, &q, &pts[a].1, &pts[b].1, n),
                )
            })
            .collect();
        Ok((curve, inputs))
    };
    let (curve, inputs) = match setup() {
        Ok(s) => s,
        Err(e) => return vec![CheckLine::fail("regulators.k2-tate", format!("error: {e}"))],
    };
    let fine = curve.subdivide(0, num_rational::Rational64::new(1, 2));
    let mut out = Vec::new();
    for (label, input) in &inputs {
        let name = format!("regulators.k2-tate[{label}]");
        out.push(guard(&name, (|| {
            let reg = k2_tate_regulator(&cfg, &curve, input)?;
            let constant = reg.cochain[1].approx_eq(&reg.cochain[0], digits);
            let fine_reg = k2_tate_regulator(&cfg, fine.as_ref().map_err(Clone::clone)?, input)?;
            let refined = fine_reg.cochain.iter().all(|x| x.approx_eq(&reg.cochain[0], digits));
            let k2 = input.at_truncation(&cfg, reg.truncation.unwrap_or(8))?;
            let logs = log_identity_holds(&curve, &k2, &cfg)?;
            let vals: Vec<i64> = reg.valuations().into_iter().map(|v| v.unwrap_or(i64::MIN)).collect();
            Ok(CheckLine::from_bool(
                &name,
                constant && refined && logs && vals.iter().all(|&v| v == vals[0]),
                format!(
                    "value {}, constant: {constant}, subdivided: {refined}, log identity: {logs}, val {vals:?}",
                    reg.cochain[0]
                ),
            ))
        })()));
    }
    out
}

/// Long exact sequence on the graph corpus, the injective case, and
/// invariance of `jacobian_valuation` under period shifts.
pub fn consani_and_valuation() -> Vec<CheckLine> {
    let mut out = Vec::new();
    for (name, g) in corpus::graph_corpus() {
        let data = weight::curve_chow_data(&g);
        let line_name = format!("weight.consani-les[{name}]");
        out.push(guard(&line_name, (|| {
            let mut dims = Vec::new();
            let mut injective_cases = 0;
            for k in 0..=1 {
                for r in 0..=2 {
                    let c = weight::consani_deligne(&data, k, r)?;
                    if !c.les_holds() {
                        return Ok(CheckLine::fail(&line_name, format!("LES fails at k={k}, r={r}")));
                    }
                    if k + 1 < 2 * r && c.ker_dim == 0 {
                        injective_cases += 1;
                        if c.dimension != c.coker_dim {
                            return Ok(CheckLine::fail(&line_name, format!("injective case k={k}, r={r}")));
                        }
                    }
                    dims.push(c.dimension);
                }
            }
            Ok(CheckLine::pass(
                &line_name,
                format!("dims {dims:?} for k in 0..=1, r in 0..=2; {injective_cases} injective cases"),
            ))
        })()));
    }
    let name = "weight.valuation-shift-invariance";
    out.push(guard(name, (|| {
        let cfg = config(5, 12, 3);
        let mut r = corpus::rng(9);
        let jac = toric_jacobian(
            &cfg,
            3,
            vec![
                vec![cfg.int(25), cfg.int(5), cfg.int(2)],
                vec![cfg.int(5), cfg.int(125), cfg.int(3)],
            ],
        )?;
        for case in 0..100 {
            let x: Vec<PadicNumber> = (0..3).map(|_| corpus::random_element(&mut r, &cfg, -4, 4)).collect();
            let t: Vec<i128> = (0..2).map(|_| r.gen_range(-5..=5)).collect();
            let a = jacobian_valuation(&jac, &x)?;
            let b = jacobian_valuation(&jac, &jac.shift(&x, &t)?)?;
            if a != b {
                return Ok(CheckLine::fail(name, format!("case {case}: {a:?} vs {b:?}")));
            }
        }
        Ok(CheckLine::pass(name, "100/100 random shifts, free rank 1"))
    })()));
    out
}

/// The Tate x Tate toy datum: normalization and orientation checks, with
/// the non-harmonic negative control.
pub fn k1_toy() -> Vec<CheckLine> {
    let cfg = config(5, 12, 3);
    let mut out = Vec::new();
    let name = "regulators.k1-normalization";
    out.push(guard(name, (|| {
        let input = k1_tate_toy(&cfg, vec![vec![1, 1]], 8)?;
        let mut r = corpus::rng(10);
        let mut scalars = Vec::new();
        for _ in 0..10 {
            let c = corpus::random_element(&mut r, &cfg, -2, 2);
            let line = k1_normalization_invariance_check(&input, &cfg, 0, &c)?;
            if !line.passed() {
                return Ok(CheckLine::fail(name, line.detail));
            }
            scalars.push(c);
        }
        Ok(CheckLine::pass(name, format!("{} random scalars", scalars.len())))
    })()));
    let name = "regulators.k1-orientation";
    out.push(guard(name, (|| {
        let input = k1_tate_toy(&cfg, vec![vec![1, 1]], 8)?;
        let line = k1_orientation_change_check(&input, &cfg, 0, 5)?;
        Ok(CheckLine::new(name, line.status, format!("B = 5: {}", line.detail)))
    })()));
    let name = "regulators.k1-negative-control";
    out.push(guard(name, (|| {
        let input = k1_tate_toy(&cfg, vec![vec![1, 0]], 8)?;
        let norm = k1_normalization_invariance_check(&input, &cfg, 0, &cfg.int(6))?;
        let found = k1_orientation_change_check(&input, &cfg, 0, 5)?;
        let undecided = k1_orientation_change_check(&input, &cfg, 0, 0)?;
        let ok = norm.status == Status::Fail && found.status == Status::Pass && undecided.status == Status::Undecided;
        Ok(CheckLine::from_bool(
            name,
            ok,
            format!(
                "non-harmonic beta: normalization {}, flip with B = 5 {}, flip with B = 0 {}",
                norm.status, found.status, undecided.status
            ),
        ))
    })()));
    out
}

pub type Group = fn() -> Vec<CheckLine>;

/// Every check group, in no particular order.
pub fn groups() -> Vec<(&'static str, Group)> {
    vec![
        ("graph-t", graph_t_groups as Group),
        ("symbols", symbol_laws),
        ("steinberg", steinberg),
        ("tate-periods", tate_periods),
        ("rank-two-periods", rank_two_periods),
        ("hurewicz", hurewicz_residues),
        ("k2-tate", k2_tate),
        ("consani", consani_and_valuation),
        ("k1-toy", k1_toy),
    ]
}

/// Runs all groups in parallel and sorts the lines by check name.
pub fn verify_all() -> Vec<CheckLine> {
    let mut lines: Vec<CheckLine> = groups().par_iter().flat_map(|(_, f)| f()).collect();
    lines.sort_by(|a, b| a.name.cmp(&b.name));
    lines
}

pub fn render(lines: &[CheckLine]) -> String {
    let mut s = String::new();
    for l in lines {
        s.push_str(&l.to_string());
        s.push('\n');
    }
    let failed = lines.iter().filter(|l| !l.passed()).count();
    s.push_str(&format!("{} checks, {} failed\n", lines.len(), failed));
    s
}
