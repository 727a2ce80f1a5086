//! Schottky groups in `PGL_2(Q_p)`: truncated theta products, the period
//! form, the Hurewicz map to graph homology and residue cochains.
//!
//! The theta function of a word `g` is evaluated as
//! `u_g(z) = prod_delta w(delta z) / w(delta z0)` over reduced words `delta`
//! of length at most `L`, with `w(z) = (z - g x)/(z - x)`. Dividing each
//! factor by its value at the base point `z0` makes the product converge;
//! it changes `u_g` only by a constant, so periods are unaffected.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{self, Graph, IntegerGroup};
use crate::linalg::IntMatrix;
use crate::padic::{PadicConfig, PadicNumber};
use crate::symbols::{annulus_degree, Annulus, SplitRationalFunction};

/// A point `[X : Y]` of `P^1(K)`.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    pub x: PadicNumber,
    pub y: PadicNumber,
}

impl ProjPoint {
    pub fn affine(z: PadicNumber) -> Self {
        let p = z.prime();
        let n = z.relative_precision().unwrap_or(8).max(8);
        ProjPoint {
            x: z,
            y: PadicNumber::one(p, n),
        }
    }

    /// `None` for the point at infinity.
    pub fn to_affine(&self) -> Result<Option<PadicNumber>> {
        if self.y.is_zero() {
            if self.x.is_zero() {
                return Err(Error::OrbitCollision("point collapsed to [0:0] at this precision".into()));
            }
            return Ok(None);
        }
        Ok(Some(self.x.try_div(&self.y)?))
    }
}

/// `P.X * Q.Y - Q.X * P.Y`, zero exactly when `P = Q`.
fn cross(p: &ProjPoint, q: &ProjPoint) -> PadicNumber {
    &(&p.x * &q.y) - &(&q.x * &p.y)
}

/// A 2x2 matrix over `K` acting by Mobius transformations.
#[derive(Clone, Debug)]
pub struct MobiusTransform {
    pub m: [[PadicNumber; 2]; 2],
}

impl MobiusTransform {
    pub fn new(a: PadicNumber, b: PadicNumber, c: PadicNumber, d: PadicNumber) -> Result<Self> {
        let t = MobiusTransform { m: [[a, b], [c, d]] };
        if t.det().is_zero() {
            return Err(Error::Domain("singular Mobius matrix".into()));
        }
        Ok(t)
    }

    pub fn identity(cfg: &PadicConfig) -> Self {
        MobiusTransform {
            m: [
                [cfg.int(1), PadicNumber::exact_zero(cfg.prime)],
                [PadicNumber::exact_zero(cfg.prime), cfg.int(1)],
            ],
        }
    }

    pub fn det(&self) -> PadicNumber {
        &(&self.m[0][0] * &self.m[1][1]) - &(&self.m[0][1] * &self.m[1][0])
    }

    pub fn trace(&self) -> PadicNumber {
        &self.m[0][0] + &self.m[1][1]
    }

    pub fn compose(&self, o: &Self) -> Self {
        let e = |i: usize, j: usize| &(&self.m[i][0] * &o.m[0][j]) + &(&self.m[i][1] * &o.m[1][j]);
        MobiusTransform {
            m: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        }
    }

    /// The adjugate, which is the inverse up to scalar.
    pub fn inverse(&self) -> Self {
        MobiusTransform {
            m: [
                [self.m[1][1].clone(), -&self.m[0][1]],
                [-&self.m[1][0], self.m[0][0].clone()],
            ],
        }
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint {
            x: &(&self.m[0][0] * &p.x) + &(&self.m[0][1] * &p.y),
            y: &(&self.m[1][0] * &p.x) + &(&self.m[1][1] * &p.y),
        }
    }

    /// Projectively the identity to `digits` digits.
    pub fn is_identity_to(&self, digits: u32) -> bool {
        let scale = [&self.m[0][0], &self.m[0][1], &self.m[1][0], &self.m[1][1]]
            .iter()
            .filter_map(|x| x.valuation())
            .min();
        let Some(s) = scale else { return true };
        let small = |x: &PadicNumber| x.valuation_lower_bound().is_none_or(|v| v >= s + digits as i64);
        small(&self.m[0][1]) && small(&self.m[1][0]) && small(&(&self.m[0][0] - &self.m[1][1]))
    }

    /// `2 v(trace) < v(det)`: the eigenvalues have distinct absolute values.
    pub fn is_hyperbolic(&self) -> bool {
        match (self.trace().valuation(), self.det().valuation()) {
            (Some(t), Some(d)) => 2 * t < d,
            _ => false,
        }
    }

    /// Attracting and repelling fixed points (as projective points).
    pub fn fixed_points(&self, cfg: &PadicConfig) -> Result<(ProjPoint, ProjPoint)> {
        if !self.is_hyperbolic() {
            return Err(Error::Domain("generator is not hyperbolic".into()));
        }
        let [[a, b], [c, d]] = &self.m;
        let disc = &(&(a - d) * &(a - d)) + &(&cfg.int(4) * &(b * c));
        let s = padic_sqrt(&disc, cfg)?;
        let t = self.trace();
        let two = cfg.int(2);
        // eigenvalues (t +- s)/2; the larger one in absolute value repels
        let l1 = (&t + &s).try_div(&two)?;
        let l2 = (&t - &s).try_div(&two)?;
        let (big, small) = if l1.valuation() < l2.valuation() { (l1, l2) } else { (l2, l1) };
        let eig = |l: &PadicNumber| -> ProjPoint {
            // (A - l) v = 0, v = (b, l - a) or (l - d, c)
            let v1 = ProjPoint { x: b.clone(), y: l - a };
            if v1.x.is_zero() && v1.y.is_zero() {
                ProjPoint { x: l - d, y: c.clone() }
            } else {
                v1
            }
        };
        // the eigenvector of the larger eigenvalue (smaller valuation) attracts
        Ok((eig(&big), eig(&small)))
    }
}

/// Square root in `Q_p` (odd `p`) by Hensel lifting.
pub fn padic_sqrt(x: &PadicNumber, cfg: &PadicConfig) -> Result<PadicNumber> {
    if cfg.prime == 2 {
        return Err(Error::Domain("square roots are only implemented for odd p".into()));
    }
    if x.is_exact_zero() {
        return Ok(x.clone());
    }
    let v = x.valuation().ok_or_else(|| Error::Precision("square root of zero to precision".into()))?;
    if v % 2 != 0 {
        return Err(Error::Domain(format!("{x} is not a square in Q_{}", cfg.prime)));
    }
    let prec = x.relative_precision().expect("nonzero");
    let u = PadicNumber::from_parts(cfg.prime, 0, x.unit().expect("nonzero").clone(), prec)?;
    let p = cfg.prime as u64;
    let u0 = x.unit().expect("nonzero") % num_bigint::BigUint::from(p);
    let u0: u64 = u0.try_into().expect("small");
    let r0 = (1..p).find(|r| (r * r) % p == u0).ok_or_else(|| {
        Error::Domain(format!("{x} is not a square in Q_{}", cfg.prime))
    })?;
    let mut r = PadicNumber::from_int(r0 as i64, cfg.prime, prec);
    let two = PadicNumber::from_int(2, cfg.prime, prec);
    for _ in 0..(64 - prec.leading_zeros()) + 1 {
        // Newton: r <- (r + u/r)/2
        r = (&r + &u.try_div(&r)?).try_div(&two)?;
    }
    let scale = PadicNumber::from_parts(cfg.prime, v / 2, 1u32.into(), prec)?;
    Ok(&r * &scale)
}

/// A letter `(generator, +1 | -1)`.
pub type Letter = (usize, i8);
pub type Word = Vec<Letter>;

pub fn reduce_word(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if let Some(&last) = out.last() {
            if last.0 == l.0 && last.1 == -l.1 {
                out.pop();
                continue;
            }
        }
        out.push(l);
    }
    out
}

pub fn word_inverse(w: &[Letter]) -> Word {
    w.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

/// Parses words such as `g1 g2^-1 g1` or `g1*g2` (generators are 1-based).
pub fn parse_word(text: &str) -> Result<Word> {
    let mut out = Vec::new();
    for tok in text.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
        if tok == "1" || tok == "id" {
            continue;
        }
        let (base, exp) = match tok.split_once('^') {
            Some((b, e)) => (b, e.parse::<i64>().map_err(|_| Error::parse("<word>", format!("bad exponent in {tok:?}")))?),
            None => (tok, 1),
        };
        let idx: usize = base
            .strip_prefix('g')
            .and_then(|s| s.parse().ok())
            .filter(|&i: &usize| i >= 1)
            .ok_or_else(|| Error::parse("<word>", format!("bad generator {tok:?}")))?;
        let sign: i8 = if exp < 0 { -1 } else { 1 };
        for _ in 0..exp.unsigned_abs() {
            out.push((idx - 1, sign));
        }
    }
    Ok(reduce_word(&out))
}

pub fn format_word(w: &[Letter]) -> String {
    if w.is_empty() {
        return "id".into();
    }
    w.iter()
        .map(|&(g, e)| if e > 0 { format!("g{}", g + 1) } else { format!("g{}^-1", g + 1) })
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Clone, Debug)]
pub struct SchottkyGroup {
    pub cfg: PadicConfig,
    pub generators: Vec<MobiusTransform>,
    /// `(attracting, repelling)` per generator.
    pub fixed_points: Vec<(ProjPoint, ProjPoint)>,
}

impl SchottkyGroup {
    pub fn new(cfg: &PadicConfig, generators: Vec<MobiusTransform>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Domain("a Schottky group needs at least one generator".into()));
        }
        let fixed_points = generators
            .iter()
            .enumerate()
            .map(|(i, g)| g.fixed_points(cfg).map_err(|e| Error::Domain(format!("generator {}: {e}", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        let grp = SchottkyGroup {
            cfg: cfg.clone(),
            generators,
            fixed_points,
        };
        // no short relations
        for (w, m) in grp.words(2)? {
            if !w.is_empty() && m.is_identity_to(cfg.check_digits()) {
                return Err(Error::Domain(format!("relation detected: {} = 1", format_word(&w))));
            }
        }
        Ok(grp)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    fn letter_matrix(&self, l: Letter) -> MobiusTransform {
        if l.1 > 0 {
            self.generators[l.0].clone()
        } else {
            self.generators[l.0].inverse()
        }
    }

    pub fn word_matrix(&self, w: &[Letter]) -> MobiusTransform {
        w.iter()
            .fold(MobiusTransform::identity(&self.cfg), |acc, &l| acc.compose(&self.letter_matrix(l)))
    }

    /// Reduced words of length at most `max_len` in length-lexicographic
    /// order, with their matrices.
    pub fn words(&self, max_len: usize) -> Result<Vec<(Word, MobiusTransform)>> {
        let layers = self.word_layers(max_len);
        Ok(layers.into_iter().flatten().collect())
    }

    /// Words grouped by length.
    pub fn word_layers(&self, max_len: usize) -> Vec<Vec<(Word, MobiusTransform)>> {
        let mut layers: Vec<Vec<(Word, MobiusTransform)>> = vec![vec![(Vec::new(), MobiusTransform::identity(&self.cfg))]];
        for _ in 0..max_len {
            extend_layers(self, &mut layers);
        }
        layers
    }

    /// Affine point from an integer or rational literal.
    pub fn point(&self, z: PadicNumber) -> ProjPoint {
        ProjPoint::affine(z)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaValue {
    #[serde(serialize_with = "ser_padic")]
    pub value: PadicNumber,
    pub length: usize,
    /// Valuation of `(last layer product) - 1`, `None` when it vanishes to precision.
    pub last_increment: Option<i64>,
}

fn ser_padic<S: serde::Serializer>(x: &PadicNumber, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Evaluation points and base point for theta products.
#[derive(Clone, Debug)]
pub struct ThetaPoints {
    pub x: ProjPoint,
    pub z0: ProjPoint,
}

fn layer_factor(
    layer: &[(Word, MobiusTransform)],
    gx: &ProjPoint,
    pts: &ThetaPoints,
    z: &ProjPoint,
    one: &PadicNumber,
) -> Result<PadicNumber> {
    let factors: Vec<Result<PadicNumber>> = layer
        .par_iter()
        .map(|(w, m)| {
            let dz = m.apply(z);
            let dz0 = m.apply(&pts.z0);
            let num = &cross(&dz, gx) * &cross(&dz0, &pts.x);
            let den = &cross(&dz, &pts.x) * &cross(&dz0, gx);
            if num.is_zero() || den.is_zero() {
                return Err(Error::OrbitCollision(format!(
                    "evaluation point meets the orbit under {}",
                    format_word(w)
                )));
            }
            num.try_div(&den)
        })
        .collect();
    // fixed combination order
    let mut acc = one.clone();
    for f in factors {
        acc = &acc * &f?;
    }
    Ok(acc)
}

/// Truncated `u_g(z)` over words of length at most `len`.
pub fn theta_eval(
    grp: &SchottkyGroup,
    g: &[Letter],
    pts: &ThetaPoints,
    z: &ProjPoint,
    len: usize,
) -> Result<ThetaValue> {
    let layers = grp.word_layers(len);
    theta_from_layers(grp, &layers, g, pts, z)
}

fn theta_from_layers(
    grp: &SchottkyGroup,
    layers: &[Vec<(Word, MobiusTransform)>],
    g: &[Letter],
    pts: &ThetaPoints,
    z: &ProjPoint,
) -> Result<ThetaValue> {
    let one = grp.cfg.int(1);
    let g = reduce_word(g);
    if g.is_empty() {
        return Ok(ThetaValue {
            value: one,
            length: layers.len() - 1,
            last_increment: None,
        });
    }
    let gx = grp.word_matrix(&g).apply(&pts.x);
    let mut acc = one.clone();
    let mut last = None;
    for layer in layers {
        let f = layer_factor(layer, &gx, pts, z, &one)?;
        last = (&f - &one).valuation();
        acc = &acc * &f;
    }
    Ok(ThetaValue {
        value: acc,
        length: layers.len() - 1,
        last_increment: last,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodValue {
    #[serde(serialize_with = "ser_padic")]
    pub value: PadicNumber,
    pub length: usize,
    pub stabilized: bool,
}

/// `mu(g_i, g_j) = u_{g_j}(g_i z) / u_{g_j}(z)`, at the first length `L`
/// where `L` and `L + 1` agree to the working precision, cross-checked at a
/// second evaluation point.
pub fn period(
    grp: &SchottkyGroup,
    gi: &[Letter],
    gj: &[Letter],
    pts: &ThetaPoints,
    z: &[ProjPoint; 2],
) -> Result<PeriodValue> {
    let one = grp.cfg.int(1);
    let gj = reduce_word(gj);
    if gj.is_empty() {
        return Ok(PeriodValue {
            value: one,
            length: 0,
            stabilized: true,
        });
    }
    let digits = grp.cfg.precision;
    let max_len = grp.cfg.max_truncation;
    let gx = grp.word_matrix(&gj).apply(&pts.x);
    let gim = grp.word_matrix(gi);
    let evals = [gim.apply(&z[0]), z[0].clone(), gim.apply(&z[1]), z[1].clone()];
    let mut acc = vec![one.clone(); 4];
    let mut layers: Vec<Vec<(Word, MobiusTransform)>> =
        vec![vec![(Vec::new(), MobiusTransform::identity(&grp.cfg))]];
    let mut prev: Option<PadicNumber> = None;
    for len in 0..=max_len {
        if len > 0 {
            extend_layers(grp, &mut layers);
            // only the newest layer is needed from here on
            let last = layers.pop().expect("nonempty");
            layers.clear();
            layers.push(last);
        }
        let layer = &layers[0];
        for (a, e) in acc.iter_mut().zip(&evals) {
            *a = &*a * &layer_factor(layer, &gx, pts, e, &one)?;
        }
        let cur = acc[0].try_div(&acc[1])?;
        if let Some(p) = &prev {
            if len >= 2 && cur.approx_eq(p, digits) {
                let other = acc[2].try_div(&acc[3])?;
                if !other.approx_eq(&cur, grp.cfg.check_digits()) {
                    return Err(Error::NonConvergence(format!(
                        "period depends on the evaluation point: {cur} vs {other}"
                    )));
                }
                return Ok(PeriodValue {
                    value: cur,
                    length: len,
                    stabilized: true,
                });
            }
        }
        prev = Some(cur);
    }
    Err(Error::NonConvergence(format!("period did not stabilize by length {max_len}")))
}

fn extend_layers(grp: &SchottkyGroup, layers: &mut Vec<Vec<(Word, MobiusTransform)>>) {
    let letters: Vec<Letter> = (0..grp.rank()).flat_map(|g| [(g, 1i8), (g, -1i8)]).collect();
    let prev = layers.last().expect("nonempty");
    let next: Vec<(Word, MobiusTransform)> = prev
        .par_iter()
        .flat_map_iter(|(w, m)| {
            letters.iter().filter_map(move |&l| {
                if let Some(&last) = w.last() {
                    if last.0 == l.0 && last.1 == -l.1 {
                        return None;
                    }
                }
                let mut w2 = w.clone();
                w2.push(l);
                Some((w2, m.compose(&grp.letter_matrix(l))))
            })
        })
        .collect();
    layers.push(next);
}

#[derive(Clone, Debug)]
pub struct PeriodMatrix {
    pub entries: Vec<Vec<PadicNumber>>,
    pub lengths: Vec<Vec<usize>>,
}

impl PeriodMatrix {
    pub fn val_matrix(&self) -> Result<IntMatrix> {
        let r = self.entries.len();
        let mut m = IntMatrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                m[(i, j)] = self.entries[i][j]
                    .valuation()
                    .ok_or_else(|| Error::Precision("period is zero to precision".into()))?
                    as i128;
            }
        }
        Ok(m)
    }

    /// Largest `v(Q_ij / Q_ji - 1)` deficit: `None` when symmetric to `digits`.
    pub fn asymmetry(&self, digits: u32) -> Option<(usize, usize)> {
        let r = self.entries.len();
        for i in 0..r {
            for j in i + 1..r {
                if !self.entries[i][j].approx_eq(&self.entries[j][i], digits) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

pub fn period_matrix(grp: &SchottkyGroup, pts: &ThetaPoints, z: &[ProjPoint; 2]) -> Result<PeriodMatrix> {
    let r = grp.rank();
    let mut entries: Vec<Vec<PadicNumber>> = vec![Vec::with_capacity(r); r];
    let mut lengths: Vec<Vec<usize>> = vec![Vec::with_capacity(r); r];
    for i in 0..r {
        for j in 0..r {
            let pv = period(grp, &[(i, 1)], &[(j, 1)], pts, z)?;
            entries[i].push(pv.value);
            lengths[i].push(pv.length);
        }
    }
    Ok(PeriodMatrix { entries, lengths })
}

/// For each generator, the closed edge path in the quotient graph its axis
/// projects to, as `(edge index, +1 | -1)` steps starting at `base`.
#[derive(Clone, Debug)]
pub struct LiftData {
    pub base: usize,
    pub paths: Vec<Vec<(usize, i8)>>,
}

impl LiftData {
    pub fn from_json_value(g: &Graph, v: &serde_json::Value, path: &str) -> Result<Self> {
        let err = |m: String| Error::parse(path, m);
        let base_name = v
            .get("base")
            .and_then(|b| b.as_str())
            .ok_or_else(|| err("missing string \"base\"".into()))?;
        let base = g
            .vertex_index(base_name)
            .ok_or_else(|| err(format!("unknown base vertex {base_name:?}")))?;
        let gens = v
            .get("paths")
            .and_then(|p| p.as_array())
            .ok_or_else(|| err("missing array \"paths\"".into()))?;
        let mut paths = Vec::new();
        for (n, p) in gens.iter().enumerate() {
            let steps = p.as_array().ok_or_else(|| err(format!("paths[{n}] must be an array")))?;
            let mut out = Vec::new();
            for (s, step) in steps.iter().enumerate() {
                let text = step
                    .as_str()
                    .ok_or_else(|| err(format!("paths[{n}][{s}] must be an edge id")))?;
                let (id, sign) = match text.strip_prefix('-') {
                    Some(rest) => (rest, -1i8),
                    None => (text, 1i8),
                };
                let k = g
                    .edge_index(id)
                    .ok_or_else(|| err(format!("paths[{n}][{s}]: unknown edge {id:?}")))?;
                out.push((k, sign));
            }
            paths.push(out);
        }
        Ok(LiftData { base, paths })
    }
}

/// Hurewicz image of a word as an integer 1-cochain (a cycle).
pub fn hurewicz(quotient: &Graph, lifts: &LiftData, word: &[Letter]) -> Result<Vec<i128>> {
    for (gi, path) in lifts.paths.iter().enumerate() {
        let mut at = lifts.base;
        for &(k, s) in path {
            let e = quotient
                .edges()
                .get(k)
                .ok_or_else(|| Error::InconsistentLift(format!("generator {}: no edge {k}", gi + 1)))?;
            let (from, to) = if s > 0 { (e.tail, e.head) } else { (e.head, e.tail) };
            if from != at {
                return Err(Error::InconsistentLift(format!(
                    "generator {}: path breaks at edge {}",
                    gi + 1,
                    e.id
                )));
            }
            at = to;
        }
        if at != lifts.base {
            return Err(Error::InconsistentLift(format!("generator {}: path is not closed", gi + 1)));
        }
    }
    let mut c = vec![0i128; quotient.num_edges()];
    for &(g, e) in word {
        let path = lifts
            .paths
            .get(g)
            .ok_or_else(|| Error::InconsistentLift(format!("no lift for generator {}", g + 1)))?;
        for &(k, s) in path {
            c[k] += (e as i128) * (s as i128);
        }
    }
    debug_assert!(graph::is_harmonic(quotient, &IntegerGroup, &c));
    Ok(c)
}

/// The split rational function `prod_delta (z - delta g x)/(z - delta x)`
/// over reduced words of length at most `len`.
pub fn truncated_theta_function(
    grp: &SchottkyGroup,
    g: &[Letter],
    x: &ProjPoint,
    len: usize,
) -> Result<SplitRationalFunction> {
    let g = reduce_word(g);
    let one = SplitRationalFunction::constant(grp.cfg.int(1))?;
    if g.is_empty() {
        return Ok(one);
    }
    let gm = grp.word_matrix(&g);
    let mut div: Vec<(PadicNumber, i64)> = Vec::new();
    let mut add = |p: ProjPoint, m: i64| -> Result<()> {
        if let Some(a) = p.to_affine()? {
            if let Some(slot) = div.iter_mut().find(|(b, _)| (b - &a).is_zero()) {
                slot.1 += m;
            } else {
                div.push((a, m));
            }
        }
        Ok(())
    };
    for (_, d) in grp.words(len)? {
        add(d.apply(&gm.apply(x)), 1)?;
        add(d.apply(x), -1)?;
    }
    div.retain(|(_, m)| *m != 0);
    SplitRationalFunction::new(grp.cfg.int(1), div)
}

/// Residues of the truncated theta function of `g` on the edge charts.
pub fn residue_cochain(
    grp: &SchottkyGroup,
    g: &[Letter],
    x: &ProjPoint,
    charts: &[Annulus],
    len: usize,
) -> Result<Vec<i128>> {
    let f = truncated_theta_function(grp, g, x, len)?;
    charts.iter().map(|e| annulus_degree(&f, e).map(|d| d as i128)).collect()
}

/// Residue cochain checked against the Hurewicz image.
pub fn residue_matches_hurewicz(
    grp: &SchottkyGroup,
    quotient: &Graph,
    lifts: &LiftData,
    g: &[Letter],
    x: &ProjPoint,
    charts: &[Annulus],
    len: usize,
) -> Result<Vec<i128>> {
    let res = residue_cochain(grp, g, x, charts, len)?;
    let hur = hurewicz(quotient, lifts, &reduce_word(g))?;
    if res != hur {
        return Err(Error::Mismatch(format!(
            "word {}: residues {res:?} but Hurewicz {hur:?}",
            format_word(g)
        )));
    }
    Ok(res)
}

/// Period data of `N~` on the Hurewicz basis: `periods[i][j] = Q_ij`.
pub fn augmented_monodromy_from_periods(p: &PeriodMatrix, cfg: &PadicConfig) -> Result<Vec<Vec<PadicNumber>>> {
    if let Some((i, j)) = p.asymmetry(cfg.check_digits()) {
        return Err(Error::Domain(format!(
            "period matrix is not symmetric at ({}, {})",
            i + 1,
            j + 1
        )));
    }
    Ok(p.entries.clone())
}

/// Generators `diag(q1, 1)` and `M diag(q2, 1) M^{-1}` with axes `{0, inf}`
/// and `{1, -1}`.
pub fn two_axis_group(cfg: &PadicConfig, q1: &PadicNumber, q2: &PadicNumber) -> Result<SchottkyGroup> {
    let zero = PadicNumber::exact_zero(cfg.prime);
    let one = cfg.int(1);
    let g1 = MobiusTransform::new(q1.clone(), zero.clone(), zero, one.clone())?;
    // M = [[-1, 1], [1, 1]], M^{-1} = -1/2 [[1, -1], [-1, -1]]
    let half = cfg.rational(1, 2);
    let a = &(q2 + &one) * &half;
    let b = &(&one - q2) * &half;
    let g2 = MobiusTransform::new(a.clone(), b.clone(), b, a)?;
    SchottkyGroup::new(cfg, vec![g1, g2])
}

pub fn tate_group(cfg: &PadicConfig, q: &PadicNumber) -> Result<SchottkyGroup> {
    let zero = PadicNumber::exact_zero(cfg.prime);
    let g = MobiusTransform::new(q.clone(), zero.clone(), zero, cfg.int(1))?;
    SchottkyGroup::new(cfg, vec![g])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> PadicConfig {
        PadicConfig::new(5, 12).unwrap()
    }

    #[test]
    fn sqrt_and_fixed_points() {
        let c = cfg();
        let r = padic_sqrt(&c.int(-1), &c).unwrap();
        assert_eq!(&r * &r, c.int(-1));
        assert!(padic_sqrt(&c.int(2), &c).is_err());
        let q = c.int(25);
        let grp = two_axis_group(&c, &q, &q).unwrap();
        let (att, rep) = &grp.fixed_points[1];
        assert_eq!(att.to_affine().unwrap().unwrap(), c.int(1));
        assert_eq!(rep.to_affine().unwrap().unwrap(), c.int(-1));
        let (att0, rep0) = &grp.fixed_points[0];
        assert!(att0.to_affine().unwrap().unwrap().is_zero());
        assert!(rep0.to_affine().unwrap().is_none());
    }

    #[test]
    fn words_and_parsing() {
        let c = cfg();
        let grp = two_axis_group(&c, &c.int(25), &c.int(25)).unwrap();
        let layers = grp.word_layers(3);
        let counts: Vec<usize> = layers.iter().map(|l| l.len()).collect();
        assert_eq!(counts, vec![1, 4, 12, 36]);
        let w = parse_word("g1 g2^-1 g2 g1^2").unwrap();
        assert_eq!(w, vec![(0, 1), (0, 1), (0, 1)]);
        assert_eq!(format_word(&parse_word("g2^-1").unwrap()), "g2^-1");
        assert!(parse_word("h1").is_err());
        let non_hyp = MobiusTransform::new(c.int(1), c.int(1), c.int(0), c.int(1)).unwrap();
        assert!(SchottkyGroup::new(&c, vec![non_hyp]).is_err());
    }

    #[test]
    fn identity_word_theta_is_one() {
        let c = cfg();
        let grp = tate_group(&c, &c.int(25)).unwrap();
        let pts = ThetaPoints {
            x: ProjPoint::affine(c.int(2)),
            z0: ProjPoint::affine(c.int(3)),
        };
        let v = theta_eval(&grp, &[], &pts, &ProjPoint::affine(c.int(7)), 4).unwrap();
        assert_eq!(v.value, c.int(1));
        // L = 0: only the identity word, w(z)/w(z0)
        let z = c.int(7);
        let w = |t: &PadicNumber| (t - &c.int(50)).try_div(&(t - &c.int(2))).unwrap();
        let v0 = theta_eval(&grp, &[(0, 1)], &pts, &ProjPoint::affine(z.clone()), 0).unwrap();
        assert_eq!(v0.value, w(&z).try_div(&w(&c.int(3))).unwrap());
    }

    #[test]
    fn tate_period_is_q() {
        let c = cfg();
        let q = c.int(25);
        let grp = tate_group(&c, &q).unwrap();
        let pts = ThetaPoints {
            x: ProjPoint::affine(c.int(2)),
            z0: ProjPoint::affine(c.int(3)),
        };
        let z = [ProjPoint::affine(c.int(7)), ProjPoint::affine(c.rational(11, 3))];
        let mu = period(&grp, &[(0, 1)], &[(0, 1)], &pts, &z).unwrap();
        assert!(mu.value.approx_eq(&q, c.precision - 3), "{}", mu.value);
        let id = period(&grp, &[], &[(0, 1)], &pts, &z).unwrap();
        assert_eq!(id.value, c.int(1));
    }

    #[test]
    fn hurewicz_on_loop() {
        let g = crate::graph::named::loop_graph();
        let lifts = LiftData {
            base: 0,
            paths: vec![vec![(0, 1)]],
        };
        assert_eq!(hurewicz(&g, &lifts, &[(0, 1), (0, 1), (0, 1)]).unwrap(), vec![3]);
        assert_eq!(hurewicz(&g, &lifts, &[]).unwrap(), vec![0]);
        let bad = LiftData {
            base: 0,
            paths: vec![vec![(0, 1), (0, 1)]],
        };
        assert!(hurewicz(&g, &bad, &[(0, 1)]).is_ok());
        let c2 = crate::graph::named::cycle(2);
        let broken = LiftData {
            base: 0,
            paths: vec![vec![(0, 1)]],
        };
        assert!(matches!(hurewicz(&c2, &broken, &[(0, 1)]), Err(Error::InconsistentLift(_))));
    }

    #[test]
    fn tate_residue_is_one() {
        let c = cfg();
        let grp = tate_group(&c, &c.int(25)).unwrap();
        let x = ProjPoint::affine(c.int(2));
        let chart = [Annulus::at_zero(5, 0, 2).unwrap()];
        assert_eq!(residue_cochain(&grp, &[(0, 1)], &x, &chart, 3).unwrap(), vec![1]);
        assert_eq!(residue_cochain(&grp, &[], &x, &chart, 3).unwrap(), vec![0]);
        assert_eq!(residue_cochain(&grp, &[(0, 1), (0, 1)], &x, &chart, 3).unwrap(), vec![2]);
    }
}
