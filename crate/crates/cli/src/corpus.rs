//! Fixed-seed corpora and the named examples used by `verify-all`.

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_core::error::Result;
use toric_core::graph::{named, Graph};
use toric_core::mumford::{tate_group, two_axis_group, LiftData, SchottkyGroup};
use toric_core::padic::{PadicConfig, PadicNumber};
use toric_core::symbols::{Annulus, Point, Side, SplitRationalFunction};

/// Seed for every generated corpus. Changing it changes the reports.
pub const CORPUS_SEED: u64 = 0x7031_c0de;

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    r.set_stream(stream);
    r
}

/// Connected multigraph with `n` vertices and `m >= n - 1` edges, loops allowed.
pub fn random_connected_multigraph(r: &mut impl Rng, n: usize, m: usize) -> Graph {
    let mut edges = Vec::with_capacity(m);
    for v in 1..n {
        let u = r.gen_range(0..v);
        edges.push(if r.gen_bool(0.5) { (u, v) } else { (v, u) });
    }
    while edges.len() < m {
        edges.push((r.gen_range(0..n), r.gen_range(0..n)));
    }
    Graph::from_indices(n, &edges)
}

/// The graph corpus: loop, C_2, C_3, C_4, theta, K_4 and two random
/// connected multigraphs with at most 8 edges.
pub fn graph_corpus() -> Vec<(String, Graph)> {
    let mut r = rng(1);
    let mut out = vec![
        ("loop".to_string(), named::loop_graph()),
        ("C2".to_string(), named::cycle(2)),
        ("C3".to_string(), named::cycle(3)),
        ("C4".to_string(), named::cycle(4)),
        ("theta".to_string(), named::theta()),
        ("K4".to_string(), named::complete(4)),
    ];
    out.push(("random-a".to_string(), random_connected_multigraph(&mut r, 4, 7)));
    out.push(("random-b".to_string(), random_connected_multigraph(&mut r, 5, 8)));
    out
}

/// `u` with `|u| < p^3`, prime to `p`, as a p-adic number times `p^k`.
pub fn random_element(r: &mut impl Rng, cfg: &PadicConfig, kmin: i64, kmax: i64) -> PadicNumber {
    let p = cfg.prime as i64;
    let bound = p * p * p;
    let mut draw = || loop {
        let u = r.gen_range(1..bound);
        if u % p != 0 {
            return u;
        }
    };
    let (a, b) = (draw(), draw());
    let sign = if r.gen_bool(0.5) { 1 } else { -1 };
    let k = r.gen_range(kmin..=kmax);
    &cfg.rational(sign * a, b) * &cfg.int(p).pow(k).expect("p is invertible")
}

/// `n` distinct roots near 0, 1 and 2 with pairwise differences of
/// valuation at most 2, none in the open part of an annulus in `avoid`.
pub fn random_root_pool(r: &mut impl Rng, cfg: &PadicConfig, avoid: &[Annulus], n: usize) -> Vec<PadicNumber> {
    let centers = [cfg.int(0), cfg.int(1), cfg.int(2)];
    let mut pool: Vec<PadicNumber> = Vec::with_capacity(n);
    while pool.len() < n {
        let c = &centers[r.gen_range(0..centers.len())];
        let a = c + &random_element(r, cfg, 0, 2);
        let open = avoid
            .iter()
            .any(|e| e.side(&Point::Finite(a.clone())).map_or(true, |s| s == Side::Open));
        let close = pool
            .iter()
            .any(|b| (&a - b).valuation().is_none_or(|v| v > 2));
        if !open && !close {
            pool.push(a);
        }
    }
    pool
}

/// Split function with 1 to 4 roots drawn from `pool` and a random constant.
pub fn random_split_function(r: &mut impl Rng, cfg: &PadicConfig, pool: &[PadicNumber]) -> SplitRationalFunction {
    let n = r.gen_range(1..=4.min(pool.len()));
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    let mut div = Vec::with_capacity(n);
    for k in 0..n {
        let j = r.gen_range(k..idx.len());
        idx.swap(k, j);
        let m = [-2, -1, 1, 2][r.gen_range(0..4)];
        div.push((pool[idx[k]].clone(), m));
    }
    SplitRationalFunction::new(random_element(r, cfg, -1, 1), div).expect("distinct roots, nonzero constant")
}

/// `{a < v(z - c) < b}` with `a` in {0, 1}, `b <= 3`, centered at 0, 1 or 2,
/// so that the roots of `random_root_pool` fall on both sides.
pub fn random_annulus(r: &mut impl Rng, cfg: &PadicConfig) -> Annulus {
    let a = r.gen_range(0..2);
    let b = r.gen_range(a + 1..=3);
    let c = cfg.int(r.gen_range(0..3));
    let mut e = Annulus::new(c, Rational64::from_integer(a), Rational64::from_integer(b)).expect("a < b");
    if r.gen_bool(0.5) {
        e = e.reversed();
    }
    e
}

/// Rank-1 model: `diag(q, 1)`, the cycle `C_n` with `n = v(q)`, charts
/// `{k < v(z) < k+1}` and the generator lifted to the whole cycle.
pub struct SchottkyModel {
    pub group: SchottkyGroup,
    pub quotient: Graph,
    pub lifts: LiftData,
    pub charts: Vec<Annulus>,
}

pub fn rank_one_model(cfg: &PadicConfig, q: &PadicNumber) -> Result<SchottkyModel> {
    let n = q.valuation().unwrap_or(1).max(1);
    let quotient = named::cycle(n as usize);
    let charts = (0..n)
        .map(|k| Annulus::at_zero(cfg.prime, k, k + 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(SchottkyModel {
        group: tate_group(cfg, q)?,
        lifts: LiftData {
            base: 0,
            paths: vec![(0..n as usize).map(|k| (k, 1)).collect()],
        },
        quotient,
        charts,
    })
}

/// Rank-2 model with axes `{0, inf}` and `{1, -1}`: quotient vertices
/// v0, v1, v2 with edges v0->v1, v1->v0 (around 0) and v0->v2, v2->v0
/// (around 1).
pub fn rank_two_model(cfg: &PadicConfig, q1: &PadicNumber, q2: &PadicNumber) -> Result<SchottkyModel> {
    let quotient = Graph::from_indices(3, &[(0, 1), (1, 0), (0, 2), (2, 0)]);
    let at = |c: i64, a: i64, b: i64| {
        Annulus::new(cfg.int(c), Rational64::from_integer(a), Rational64::from_integer(b))
    };
    let charts = vec![at(0, 0, 1)?, at(0, 1, 2)?, at(1, 0, 1)?, at(1, 1, 2)?];
    Ok(SchottkyModel {
        group: two_axis_group(cfg, q1, q2)?,
        lifts: LiftData {
            base: 0,
            paths: vec![vec![(0, 1), (1, 1)], vec![(2, 1), (3, 1)]],
        },
        quotient,
        charts,
    })
}
