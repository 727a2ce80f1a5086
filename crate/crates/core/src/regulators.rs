//! K_2 regulator cochains on annulus-decomposed curves and the K_1 surface
//! formula evaluator, with the well-definedness checks around them.
//!
//! Every value lives in `K^x`, so sums over edges and curves are products.

use num_rational::Rational64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{dual_coboundary, Graph, MultiplicativeGroup};
use crate::padic::{PadicConfig, PadicNumber};
use crate::report::{CheckLine, Status};
use crate::symbols::{
    annulus_symbol, parse_literal, tame_symbol, Annulus, EdgeChart, Point, SplitRationalFunction,
    SymbolElement,
};
use crate::weight::{jacobian_equal, jacobian_reduce, toric_jacobian, ToricJacobianElement, TriState};

/// A graph with one annulus chart per edge. The chart of an edge is
/// oriented so that its inside lies towards the head.
#[derive(Clone, Debug)]
pub struct AnnulusDecomposedCurve {
    pub graph: Graph,
    pub charts: Vec<Annulus>,
    pub tate_period: Option<PadicNumber>,
}

impl AnnulusDecomposedCurve {
    pub fn new(graph: Graph, charts: Vec<Annulus>) -> Result<Self> {
        if charts.len() != graph.num_edges() {
            return Err(Error::Contract(format!(
                "{} charts for {} edges",
                charts.len(),
                graph.num_edges()
            )));
        }
        Ok(AnnulusDecomposedCurve {
            graph,
            charts,
            tate_period: None,
        })
    }

    /// The cyclic model of `K^x / q^Z`: vertex `v_k` is the circle
    /// `v(z) = k` and edge `e_k` is `{k < v(z) < k+1}`.
    pub fn tate(cfg: &PadicConfig, q: &PadicNumber) -> Result<Self> {
        let n = tate_valuation(q)?;
        let graph = crate::graph::named::cycle(n as usize);
        let charts = (0..n)
            .map(|k| Annulus::at_zero(cfg.prime, k, k + 1))
            .collect::<Result<Vec<_>>>()?;
        Ok(AnnulusDecomposedCurve {
            graph,
            charts,
            tate_period: Some(q.clone()),
        })
    }

    /// Inserts a valuation cut `c` inside the chart of `edge`.
    pub fn subdivide(&self, edge: usize, cut: Rational64) -> Result<Self> {
        let chart = self
            .charts
            .get(edge)
            .ok_or_else(|| Error::Contract(format!("no edge {edge}")))?;
        if !(chart.a < cut && cut < chart.b) {
            return Err(Error::Domain(format!(
                "cut {cut} is outside ({}, {})",
                chart.a, chart.b
            )));
        }
        let name = format!("s{}", self.graph.edges()[edge].id);
        let (graph, first, second) = self.graph.subdivide(edge, &name)?;
        let low = Annulus {
            b: cut,
            ..chart.clone()
        };
        let high = Annulus {
            a: cut,
            ..chart.clone()
        };
        let (c1, c2) = if chart.inside_high { (low, high) } else { (high, low) };
        let mut charts = self.charts.clone();
        charts.remove(edge);
        let mut out = vec![None; graph.num_edges()];
        let mut rest = charts.into_iter();
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = Some(if k == first {
                c1.clone()
            } else if k == second {
                c2.clone()
            } else {
                rest.next().ok_or_else(|| Error::Contract("edge count mismatch".into()))?
            });
        }
        Ok(AnnulusDecomposedCurve {
            graph,
            charts: out.into_iter().map(|c| c.expect("filled")).collect(),
            tate_period: self.tate_period.clone(),
        })
    }

    pub fn from_json_value(v: &Value, cfg: &PadicConfig, path: &str) -> Result<Self> {
        if let Some(t) = v.get("tate") {
            let q = t
                .get("q")
                .ok_or_else(|| Error::parse(path, "tate model needs \"q\""))
                .and_then(|q| parse_literal(q, cfg).map_err(|e| Error::parse(path, e.to_string())))?;
            return Self::tate(cfg, &q);
        }
        let g = v.get("graph").ok_or_else(|| Error::parse(path, "missing \"graph\""))?;
        let graph = Graph::from_json_str(&g.to_string(), path)?;
        let charts_v = v.get("charts").ok_or_else(|| Error::parse(path, "missing \"charts\""))?;
        let charts = graph
            .edges()
            .iter()
            .map(|e| {
                let c = charts_v
                    .get(&e.id)
                    .ok_or_else(|| Error::parse(path, format!("no chart for edge {}", e.id)))?;
                Annulus::from_json_value(c, cfg, path)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(graph, charts)
    }
}

fn tate_valuation(q: &PadicNumber) -> Result<i64> {
    match q.valuation() {
        Some(n) if n >= 1 => Ok(n),
        _ => Err(Error::Domain(format!("Tate parameter needs v(q) >= 1, got {q}"))),
    }
}

/// Truncated theta quotient `z^k prod_j theta_L(z/a_j)^{m_j}` where
/// `theta(z) = prod_{n>=0}(1 - q^n z) prod_{n>=1}(1 - q^n/z)` and
/// `k = -s` when `prod a_j^{m_j}` has valuation `s v(q)`.
pub fn tate_theta_function(
    cfg: &PadicConfig,
    q: &PadicNumber,
    divisor: &[(PadicNumber, i64)],
    l: usize,
) -> Result<SplitRationalFunction> {
    let vq = tate_valuation(q)?;
    let degree: i64 = divisor.iter().map(|(_, m)| m).sum();
    if degree != 0 {
        return Err(Error::Domain(format!("divisor has degree {degree}, expected 0")));
    }
    let mut total_val = 0;
    for (a, m) in divisor {
        let v = a
            .valuation()
            .ok_or_else(|| Error::Domain(format!("divisor point {a} is zero")))?;
        total_val += v * m;
    }
    if total_val % vq != 0 {
        return Err(Error::Domain(format!(
            "divisor product has valuation {total_val}, not a multiple of v(q) = {vq}"
        )));
    }
    let s = total_val / vq;
    let one = cfg.int(1);
    let mut roots: Vec<(PadicNumber, i64)> = Vec::new();
    let mut push = |r: PadicNumber, m: i64| -> Result<()> {
        if r.is_zero() {
            return Err(Error::Domain("theta root collapsed to zero".into()));
        }
        match roots.iter_mut().find(|(b, _)| (&r - b).is_zero()) {
            Some(slot) => slot.1 += m,
            None => roots.push((r, m)),
        }
        Ok(())
    };
    let mut constant = one.clone();
    let qinv = q.inverse()?;
    for (a, m) in divisor {
        let mut qn = one.clone();
        let mut qmn = one.clone();
        for n in 0..=l {
            if n > 0 {
                qn = &qn * q;
                qmn = &qmn * &qinv;
                push(a * &qn, *m)?;
            }
            push(a * &qmn, *m)?;
            let c = -(&qn.try_div(a)?);
            constant = &constant * &c.pow(*m)?;
        }
    }
    if s != 0 {
        roots.push((PadicNumber::exact_zero(cfg.prime), -s));
    }
    SplitRationalFunction::new(constant, roots.into_iter().filter(|(_, m)| *m != 0).collect())
}

/// One truncated restriction per edge of the Tate model.
pub fn k2_tate_theta_restrict(
    cfg: &PadicConfig,
    q: &PadicNumber,
    divisor: &[(PadicNumber, i64)],
    l: usize,
) -> Result<Vec<SplitRationalFunction>> {
    let n = tate_valuation(q)?;
    let f = tate_theta_function(cfg, q, divisor, l)?;
    Ok(vec![f; n as usize])
}

#[derive(Clone, Debug)]
pub struct K2Input {
    pub symbol: SymbolElement,
    /// `restrictions[e][i]`: restrictions of `(f_i, g_i)` to the chart of edge `e`.
    pub restrictions: Option<Vec<Vec<(SplitRationalFunction, SplitRationalFunction)>>>,
    /// Points where tame-symbol triviality is enforced; empty means the
    /// joint support of all terms.
    pub check_points: Vec<Point>,
}

impl K2Input {
    pub fn global(symbol: SymbolElement) -> Self {
        K2Input {
            symbol,
            restrictions: None,
            check_points: Vec::new(),
        }
    }

    pub fn concat(&self, other: &K2Input) -> Result<K2Input> {
        let restrictions = match (&self.restrictions, &other.restrictions) {
            (None, None) => None,
            (Some(a), Some(b)) if a.len() == b.len() => Some(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.iter().chain(y).cloned().collect())
                    .collect(),
            ),
            _ => return Err(Error::Contract("cannot concatenate inputs with different restriction layouts".into())),
        };
        let mut check_points = self.check_points.clone();
        check_points.extend(other.check_points.iter().cloned());
        Ok(K2Input {
            symbol: self.symbol.concat(&other.symbol),
            restrictions,
            check_points,
        })
    }
}

#[derive(Clone, Debug)]
pub struct K2Regulator {
    pub cochain: Vec<PadicNumber>,
    /// Class in `K^x / q^Z` for Tate models.
    pub tate_class: Option<ToricJacobianElement>,
    /// Theta truncation length used for Tate inputs.
    pub truncation: Option<usize>,
}

impl K2Regulator {
    pub fn valuations(&self) -> Vec<Option<i64>> {
        self.cochain.iter().map(|x| x.valuation()).collect()
    }

    pub fn to_json_value(&self, g: &Graph) -> Value {
        let mut cochain = serde_json::Map::new();
        for (e, x) in g.edges().iter().zip(&self.cochain) {
            cochain.insert(e.id.clone(), json!(x.to_string()));
        }
        let mut out = json!({ "cochain": cochain });
        if let Some(c) = &self.tate_class {
            out["tate_class"] = json!({
                "normal_form": c.normal_form[0].to_string(),
                "witness": c.witness.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            });
        }
        if let Some(l) = self.truncation {
            out["truncation"] = json!(l);
        }
        out
    }
}

fn symbol_points(sym: &SymbolElement) -> Vec<Point> {
    let mut pts: Vec<Point> = Vec::new();
    for (f, g, _) in &sym.terms {
        for x in f.support().into_iter().chain(g.support()) {
            let seen = pts.iter().any(|y| match (y, &x) {
                (Point::Infinity, Point::Infinity) => true,
                (Point::Finite(a), Point::Finite(b)) => (a - b).is_zero(),
                _ => false,
            });
            if !seen {
                pts.push(x);
            }
        }
    }
    pts
}

/// Points where `prod_i t_x(f_i, g_i)^{n_i}` is not 1 to `N - s` digits,
/// with the offending value.
pub fn tame_obstructions(input: &K2Input, cfg: &PadicConfig) -> Result<Vec<(Point, PadicNumber)>> {
    let pts = if input.check_points.is_empty() {
        symbol_points(&input.symbol)
    } else {
        input.check_points.clone()
    };
    let mut bad = Vec::new();
    for x in pts {
        let mut acc = cfg.int(1);
        for (f, g, n) in &input.symbol.terms {
            acc = &acc * &tame_symbol(f, g, &x)?.pow(*n)?;
        }
        if !acc.is_one_to(cfg.check_digits()) {
            bad.push((x, acc));
        }
    }
    Ok(bad)
}

fn multiplicative(cfg: &PadicConfig) -> MultiplicativeGroup {
    MultiplicativeGroup {
        prime: cfg.prime,
        precision: cfg.precision,
        digits: cfg.check_digits(),
    }
}

/// The cochain `e -> prod_i t_e(f_i, g_i)^{n_i}` without any checks.
pub fn k2_cochain(curve: &AnnulusDecomposedCurve, input: &K2Input, cfg: &PadicConfig) -> Result<Vec<PadicNumber>> {
    if let Some(r) = &input.restrictions {
        if r.len() != curve.charts.len() {
            return Err(Error::Contract(format!(
                "restrictions for {} edges, curve has {}",
                r.len(),
                curve.charts.len()
            )));
        }
    }
    let charts: Vec<EdgeChart> = curve
        .charts
        .iter()
        .enumerate()
        .map(|(k, a)| EdgeChart {
            annulus: a.clone(),
            restrictions: input.restrictions.as_ref().map(|r| r[k].clone()),
        })
        .collect();
    crate::symbols::symbol_cochain(&input.symbol, &charts, cfg)
}

pub fn k2_regulator(curve: &AnnulusDecomposedCurve, input: &K2Input, cfg: &PadicConfig) -> Result<K2Regulator> {
    let bad = tame_obstructions(input, cfg)?;
    if !bad.is_empty() {
        return Err(Error::NotInK2(
            bad.iter().map(|(x, t)| format!("{x}: tame symbol {t}")).collect(),
        ));
    }
    let cochain = k2_cochain(curve, input, cfg)?;
    let grp = multiplicative(cfg);
    let dstar = dual_coboundary(&curve.graph, &grp, &cochain);
    for (v, x) in dstar.iter().enumerate() {
        if !x.is_one_to(grp.digits) {
            return Err(Error::InconsistentData(format!(
                "regulator cochain is not harmonic at vertex {}: d* = {x}",
                curve.graph.vertices()[v]
            )));
        }
    }
    let tate_class = match &curve.tate_period {
        Some(q) => {
            let jac = toric_jacobian(cfg, 1, vec![vec![q.clone()]])?;
            Some(jacobian_reduce(&jac, &cochain[..1])?)
        }
        None => None,
    };
    Ok(K2Regulator {
        cochain,
        tate_class,
        truncation: None,
    })
}

/// `log t_e` against `sum_{x inside e} log t_x`, per edge.
pub fn log_identity_holds(curve: &AnnulusDecomposedCurve, input: &K2Input, cfg: &PadicConfig) -> Result<bool> {
    let cochain = k2_cochain(curve, input, cfg)?;
    for (k, chart) in curve.charts.iter().enumerate() {
        let lhs = cochain[k].iwasawa_log()?;
        let mut rhs = PadicNumber::exact_zero(cfg.prime);
        for (i, (f, g, n)) in input.symbol.terms.iter().enumerate() {
            let (fe, ge) = match &input.restrictions {
                Some(r) => (&r[k][i].0, &r[k][i].1),
                None => (f, g),
            };
            for (_, t) in crate::symbols::annulus_symbol_factors(fe, ge, chart)? {
                rhs = &rhs + &(&t.iwasawa_log()? * &cfg.int(*n));
            }
        }
        if !(&lhs - &rhs).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A factor of a symbol on `E_q`.
#[derive(Clone, Debug)]
pub enum TateFactor {
    /// The theta quotient with this divisor.
    Theta(Vec<(PadicNumber, i64)>),
    Constant(PadicNumber),
    /// `f(at)^power` for the theta quotient `f` with this divisor.
    ThetaValue {
        divisor: Vec<(PadicNumber, i64)>,
        at: PadicNumber,
        power: i64,
    },
}

impl TateFactor {
    fn realize(&self, cfg: &PadicConfig, q: &PadicNumber, l: usize) -> Result<SplitRationalFunction> {
        match self {
            TateFactor::Theta(d) => tate_theta_function(cfg, q, d, l),
            TateFactor::Constant(c) => SplitRationalFunction::constant(c.clone()),
            TateFactor::ThetaValue { divisor, at, power } => {
                let f = tate_theta_function(cfg, q, divisor, l)?;
                SplitRationalFunction::constant(f.eval(at)?.pow(*power)?)
            }
        }
    }

    fn from_json_value(v: &Value, cfg: &PadicConfig, path: &str) -> Result<Self> {
        let divisor = |d: &Value| -> Result<Vec<(PadicNumber, i64)>> {
            let list = d
                .as_array()
                .ok_or_else(|| Error::parse(path, "theta divisor must be an array of [point, mult]"))?;
            list.iter()
                .map(|item| {
                    let pair = item.as_array().filter(|a| a.len() == 2);
                    let pair = pair.ok_or_else(|| Error::parse(path, format!("bad divisor entry {item}")))?;
                    let a = parse_literal(&pair[0], cfg).map_err(|e| Error::parse(path, e.to_string()))?;
                    let m = pair[1]
                        .as_i64()
                        .ok_or_else(|| Error::parse(path, format!("bad multiplicity in {item}")))?;
                    Ok((a, m))
                })
                .collect()
        };
        if let Some(d) = v.get("theta") {
            return Ok(TateFactor::Theta(divisor(d)?));
        }
        if let Some(c) = v.get("constant") {
            let c = parse_literal(c, cfg).map_err(|e| Error::parse(path, e.to_string()))?;
            return Ok(TateFactor::Constant(c));
        }
        if let Some(t) = v.get("theta_value") {
            let d = t
                .get("divisor")
                .ok_or_else(|| Error::parse(path, "theta_value needs \"divisor\""))?;
            let at = t
                .get("at")
                .ok_or_else(|| Error::parse(path, "theta_value needs \"at\""))
                .and_then(|a| parse_literal(a, cfg).map_err(|e| Error::parse(path, e.to_string())))?;
            let power = t.get("power").and_then(Value::as_i64).unwrap_or(1);
            return Ok(TateFactor::ThetaValue {
                divisor: divisor(d)?,
                at,
                power,
            });
        }
        Err(Error::parse(path, format!("unknown factor {v}")))
    }
}

/// A symbol element on `E_q` given by theta-divisor data.
#[derive(Clone, Debug)]
pub struct TateK2Input {
    pub q: PadicNumber,
    pub terms: Vec<(TateFactor, TateFactor, i64)>,
}

impl TateK2Input {
    /// Divisor points of the theta factors, where tame triviality is checked.
    pub fn declared_points(&self) -> Vec<Point> {
        let mut pts: Vec<PadicNumber> = Vec::new();
        for (f, g, _) in &self.terms {
            for fac in [f, g] {
                if let TateFactor::Theta(d) = fac {
                    for (a, _) in d {
                        if !pts.iter().any(|b| (a - b).is_zero()) {
                            pts.push(a.clone());
                        }
                    }
                }
            }
        }
        pts.into_iter().map(Point::Finite).collect()
    }

    pub fn at_truncation(&self, cfg: &PadicConfig, l: usize) -> Result<K2Input> {
        let terms = self
            .terms
            .iter()
            .map(|(f, g, n)| Ok((f.realize(cfg, &self.q, l)?, g.realize(cfg, &self.q, l)?, *n)))
            .collect::<Result<Vec<_>>>()?;
        Ok(K2Input {
            symbol: SymbolElement::new(terms),
            restrictions: None,
            check_points: self.declared_points(),
        })
    }

    pub fn concat(&self, other: &TateK2Input) -> TateK2Input {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TateK2Input {
            q: self.q.clone(),
            terms,
        }
    }
}

/// `{f_P, f_Q} + {f_P, f_Q(P)^-1} + {f_Q, f_P(Q)}` where `f_X` has divisor
/// `n(X) - n(1)`; its tame symbols vanish when `P, Q` are distinct
/// `n`-torsion points of `E_q` different from 1.
pub fn tate_torsion_symbol(
    cfg: &PadicConfig,
    q: &PadicNumber,
    p: &PadicNumber,
    qq: &PadicNumber,
    n: i64,
) -> TateK2Input {
    let div = |x: &PadicNumber| vec![(x.clone(), n), (cfg.int(1), -n)];
    TateK2Input {
        q: q.clone(),
        terms: vec![
            (TateFactor::Theta(div(p)), TateFactor::Theta(div(qq)), 1),
            (
                TateFactor::Theta(div(p)),
                TateFactor::ThetaValue {
                    divisor: div(qq),
                    at: p.clone(),
                    power: -1,
                },
                1,
            ),
            (
                TateFactor::Theta(div(qq)),
                TateFactor::ThetaValue {
                    divisor: div(p),
                    at: qq.clone(),
                    power: 1,
                },
                1,
            ),
        ],
    }
}

fn tate_terms_from_json(v: &Value, cfg: &PadicConfig, path: &str) -> Result<Vec<(TateFactor, TateFactor, i64)>> {
    let list = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse(path, "missing \"terms\" array"))?;
    list.iter()
        .map(|t| {
            let f = t.get("f").ok_or_else(|| Error::parse(path, "term needs \"f\""))?;
            let g = t.get("g").ok_or_else(|| Error::parse(path, "term needs \"g\""))?;
            let n = t.get("n").and_then(Value::as_i64).unwrap_or(1);
            Ok((
                TateFactor::from_json_value(f, cfg, path)?,
                TateFactor::from_json_value(g, cfg, path)?,
                n,
            ))
        })
        .collect()
}

/// Evaluates the regulator at truncations `L, L+1, ...` and returns the
/// first value that agrees with the next one to `N - s` digits.
pub fn k2_tate_regulator(
    cfg: &PadicConfig,
    curve: &AnnulusDecomposedCurve,
    input: &TateK2Input,
) -> Result<K2Regulator> {
    let vq = tate_valuation(&input.q)? as usize;
    let start = (cfg.precision as usize).div_ceil(vq) + 1;
    let digits = cfg.check_digits();
    let mut prev: Option<(usize, Result<K2Regulator>)> = None;
    for l in start..=cfg.max_truncation.max(start + 1) {
        let cur = input
            .at_truncation(cfg, l)
            .and_then(|k2| k2_regulator(curve, &k2, cfg));
        if let (Some((lp, Ok(a))), Ok(b)) = (&prev, &cur) {
            if a.cochain.iter().zip(&b.cochain).all(|(x, y)| x.approx_eq(y, digits)) {
                let mut out = a.clone();
                out.truncation = Some(*lp);
                return Ok(out);
            }
        }
        prev = Some((l, cur));
    }
    match prev {
        Some((_, Err(e))) => Err(e),
        _ => Err(Error::NonConvergence(format!(
            "theta truncation did not stabilize by L = {}; increase the maximum truncation",
            cfg.max_truncation
        ))),
    }
}

/// Either a general annulus-decomposed input or a Tate input.
#[derive(Clone, Debug)]
pub enum K2Problem {
    General(AnnulusDecomposedCurve, K2Input),
    Tate(AnnulusDecomposedCurve, TateK2Input),
}

impl K2Problem {
    pub fn curve(&self) -> &AnnulusDecomposedCurve {
        match self {
            K2Problem::General(c, _) | K2Problem::Tate(c, _) => c,
        }
    }

    pub fn solve(&self, cfg: &PadicConfig) -> Result<K2Regulator> {
        match self {
            K2Problem::General(c, i) => k2_regulator(c, i, cfg),
            K2Problem::Tate(c, i) => k2_tate_regulator(cfg, c, i),
        }
    }

    pub fn from_json_value(v: &Value, cfg: &PadicConfig, path: &str) -> Result<Self> {
        let cv = v.get("curve").ok_or_else(|| Error::parse(path, "missing \"curve\""))?;
        let curve = AnnulusDecomposedCurve::from_json_value(cv, cfg, path)?;
        if let Some(q) = &curve.tate_period {
            let terms = tate_terms_from_json(v, cfg, path)?;
            return Ok(K2Problem::Tate(curve.clone(), TateK2Input { q: q.clone(), terms }));
        }
        let list = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse(path, "missing \"terms\" array"))?;
        let mut terms = Vec::new();
        let mut per_edge: Vec<Vec<(SplitRationalFunction, SplitRationalFunction)>> =
            vec![Vec::new(); curve.graph.num_edges()];
        let mut any_restriction = false;
        for (i, t) in list.iter().enumerate() {
            let field = |k: &str| t.get(k).ok_or_else(|| Error::parse(path, format!("terms[{i}] needs \"{k}\"")));
            let f = crate::symbols::parse_function(field("f")?, cfg, path)?;
            let g = crate::symbols::parse_function(field("g")?, cfg, path)?;
            let n = t.get("n").and_then(Value::as_i64).unwrap_or(1);
            let r = t.get("restrictions");
            any_restriction |= r.is_some();
            for (k, e) in curve.graph.edges().iter().enumerate() {
                let pair = match r.and_then(|r| r.get(&e.id)) {
                    Some(rv) => {
                        let rf = rv.get("f").map(|x| crate::symbols::parse_function(x, cfg, path));
                        let rg = rv.get("g").map(|x| crate::symbols::parse_function(x, cfg, path));
                        (rf.transpose()?.unwrap_or_else(|| f.clone()), rg.transpose()?.unwrap_or_else(|| g.clone()))
                    }
                    None => (f.clone(), g.clone()),
                };
                per_edge[k].push(pair);
            }
            terms.push((f, g, n));
        }
        let check_points = match v.get("check_points").and_then(Value::as_array) {
            Some(list) => list
                .iter()
                .map(|x| crate::symbols::parse_point(x, cfg, path))
                .collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        };
        Ok(K2Problem::General(
            curve,
            K2Input {
                symbol: SymbolElement::new(terms),
                restrictions: any_restriction.then_some(per_edge),
                check_points,
            },
        ))
    }
}

/// One edge of a curve graph in a K_1 datum.
#[derive(Clone, Debug)]
pub struct K1Edge {
    pub annulus: Annulus,
    pub g: SplitRationalFunction,
    /// Restriction of `h` at the tail vertex to this edge.
    pub h_tail: SplitRationalFunction,
    /// Restriction of `h` at the head vertex to this edge.
    pub h_head: SplitRationalFunction,
    /// Image edge in `Gamma_1` with orientation sign.
    pub pi1: (usize, i8),
    /// Image edge in `Gamma_2` with orientation sign.
    pub pi2: (usize, i8),
}

#[derive(Clone, Debug)]
pub struct K1Curve {
    pub graph: Graph,
    pub edges: Vec<K1Edge>,
}

#[derive(Clone, Debug)]
pub struct K1SurfaceInput {
    pub gamma1: Graph,
    pub gamma2: Graph,
    pub curves: Vec<K1Curve>,
    pub alpha: Vec<i128>,
    pub betas: Vec<Vec<i128>>,
}

#[derive(Clone, Debug)]
pub struct K1Regulator {
    /// One value per entry of `betas`.
    pub values: Vec<PadicNumber>,
    /// `h_tail / h_head` per edge of `Gamma_2` (None off the image of `pi_2`).
    pub context: Vec<Option<PadicNumber>>,
}

impl K1Regulator {
    pub fn to_json_value(&self, gamma2: &Graph) -> Value {
        let mut ctx = serde_json::Map::new();
        for (e, c) in gamma2.edges().iter().zip(&self.context) {
            if let Some(c) = c {
                ctx.insert(e.id.clone(), json!(c.to_string()));
            }
        }
        json!({
            "values": self.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "context": ctx,
        })
    }
}

fn signed(x: i128, s: i8) -> i128 {
    if s < 0 {
        -x
    } else {
        x
    }
}

impl K1SurfaceInput {
    /// `pi_2` on vertices of each curve graph, read off from the edge map.
    pub fn pi2_vertex_maps(&self) -> Result<Vec<Vec<usize>>> {
        self.curves
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let mut map: Vec<Option<usize>> = vec![None; c.graph.num_vertices()];
                for (k, e) in c.graph.edges().iter().enumerate() {
                    let (e2, s) = c.edges[k].pi2;
                    let img = &self.gamma2.edges()[e2];
                    let (t, h) = if s > 0 { (img.tail, img.head) } else { (img.head, img.tail) };
                    for (v, w) in [(e.tail, t), (e.head, h)] {
                        match map[v] {
                            Some(old) if old != w => {
                                return Err(Error::InconsistentData(format!(
                                    "curve {j}: pi_2 sends vertex {} to two vertices",
                                    c.graph.vertices()[v]
                                )))
                            }
                            _ => map[v] = Some(w),
                        }
                    }
                }
                map.into_iter()
                    .enumerate()
                    .map(|(v, w)| {
                        w.ok_or_else(|| {
                            Error::Contract(format!("curve {j}: isolated vertex {}", c.graph.vertices()[v]))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// Checks sizes and the cocycle condition, returning the constants
    /// `h_tail / h_head` carried to `Gamma_2`.
    pub fn validate(&self, cfg: &PadicConfig) -> Result<Vec<Option<PadicNumber>>> {
        if self.alpha.len() != self.gamma2.num_edges() {
            return Err(Error::Contract("alpha must be a cochain on Gamma_2".into()));
        }
        for b in &self.betas {
            if b.len() != self.gamma1.num_edges() {
                return Err(Error::Contract("beta must be a cochain on Gamma_1".into()));
            }
        }
        let mut ctx: Vec<Option<PadicNumber>> = vec![None; self.gamma2.num_edges()];
        for (j, c) in self.curves.iter().enumerate() {
            if c.edges.len() != c.graph.num_edges() {
                return Err(Error::Contract(format!("curve {j}: edge data does not match its graph")));
            }
            for (k, e) in c.edges.iter().enumerate() {
                let id = &c.graph.edges()[k].id;
                if e.pi1.0 >= self.gamma1.num_edges() || e.pi2.0 >= self.gamma2.num_edges() {
                    return Err(Error::Contract(format!("curve {j}, edge {id}: edge map out of range")));
                }
                let ratio = e.h_tail.mul(&e.h_head.inverse()?)?;
                if !ratio.is_constant() {
                    return Err(Error::InconsistentData(format!(
                        "curve {j}, edge {id}: h_tail / h_head is not constant"
                    )));
                }
                let r = ratio.leading_constant().pow(e.pi2.1 as i64)?;
                match &ctx[e.pi2.0] {
                    Some(old) if !old.approx_eq(&r, cfg.check_digits()) => {
                        return Err(Error::InconsistentData(format!(
                            "curve {j}, edge {id}: constant {r} disagrees with {old} on the same edge of Gamma_2"
                        )))
                    }
                    _ => ctx[e.pi2.0] = Some(r),
                }
            }
        }
        self.pi2_vertex_maps()?;
        Ok(ctx)
    }

    /// Multiplies every `h^w` with `pi_2(w) = v` by `c`.
    pub fn scale_vertex(&self, v: usize, c: &PadicNumber) -> Result<Self> {
        let maps = self.pi2_vertex_maps()?;
        let mut out = self.clone();
        let k = SplitRationalFunction::constant(c.clone())?;
        for (j, curve) in out.curves.iter_mut().enumerate() {
            for (i, e) in curve.edges.iter_mut().enumerate() {
                let ge = &curve.graph.edges()[i];
                if maps[j][ge.tail] == v {
                    e.h_tail = e.h_tail.mul(&k)?;
                }
                if maps[j][ge.head] == v {
                    e.h_head = e.h_head.mul(&k)?;
                }
            }
        }
        Ok(out)
    }

    /// Reverses edge `e2` of `Gamma_2` and every curve edge above it.
    pub fn flip(&self, e2: usize) -> Result<Self> {
        let mut out = self.clone();
        let edges: Vec<(String, String, String)> = self
            .gamma2
            .edges()
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let (t, h) = if k == e2 { (e.head, e.tail) } else { (e.tail, e.head) };
                let vs = self.gamma2.vertices();
                (e.id.clone(), vs[t].clone(), vs[h].clone())
            })
            .collect();
        out.gamma2 = Graph::new(self.gamma2.vertices().to_vec(), edges)?;
        out.alpha[e2] = -out.alpha[e2];
        for curve in out.curves.iter_mut() {
            let vs = curve.graph.vertices().to_vec();
            let mut gedges = Vec::new();
            for (i, e) in curve.edges.iter_mut().enumerate() {
                let ge = &curve.graph.edges()[i];
                let (mut t, mut h) = (ge.tail, ge.head);
                if e.pi2.0 == e2 {
                    std::mem::swap(&mut t, &mut h);
                    std::mem::swap(&mut e.h_tail, &mut e.h_head);
                    e.annulus = e.annulus.reversed();
                    e.pi1.1 = -e.pi1.1;
                }
                gedges.push((ge.id.clone(), vs[t].clone(), vs[h].clone()));
            }
            curve.graph = Graph::new(vs, gedges)?;
        }
        Ok(out)
    }

    pub fn from_json_value(v: &Value, cfg: &PadicConfig, path: &str) -> Result<Self> {
        let graph = |k: &str| -> Result<Graph> {
            let g = v.get(k).ok_or_else(|| Error::parse(path, format!("missing \"{k}\"")))?;
            Graph::from_json_str(&g.to_string(), &format!("{path}/{k}"))
        };
        let gamma1 = graph("gamma1")?;
        let gamma2 = graph("gamma2")?;
        let int = |x: &Value| x.as_i64().map(i128::from).ok_or_else(|| Error::parse(path, format!("expected integer, got {x}")));
        let alpha_v = v.get("alpha").ok_or_else(|| Error::parse(path, "missing \"alpha\""))?;
        let alpha = crate::graph::cochain_from_json(&gamma2, alpha_v, 0, int, path)?;
        let beta_v = v.get("beta").ok_or_else(|| Error::parse(path, "missing \"beta\""))?;
        let betas = match beta_v {
            Value::Array(list) => list
                .iter()
                .map(|b| crate::graph::cochain_from_json(&gamma1, b, 0, int, path))
                .collect::<Result<Vec<_>>>()?,
            b => vec![crate::graph::cochain_from_json(&gamma1, b, 0, int, path)?],
        };
        let edge_ref = |g: &Graph, x: Option<&Value>| -> Result<(usize, i8)> {
            let s = x
                .and_then(Value::as_str)
                .ok_or_else(|| Error::parse(path, "edge map entries must be edge ids"))?;
            let (id, sign) = match s.strip_prefix('-') {
                Some(rest) => (rest, -1),
                None => (s, 1),
            };
            let k = g
                .edge_index(id)
                .ok_or_else(|| Error::parse(path, format!("unknown edge {id:?}")))?;
            Ok((k, sign))
        };
        let list = v
            .get("curves")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse(path, "missing \"curves\" array"))?;
        let mut curves = Vec::new();
        for (j, cv) in list.iter().enumerate() {
            let cpath = format!("{path}/curves/{j}");
            let gv = cv.get("graph").ok_or_else(|| Error::parse(&cpath, "missing \"graph\""))?;
            let cg = Graph::from_json_str(&gv.to_string(), &cpath)?;
            let ev = cv.get("edges").ok_or_else(|| Error::parse(&cpath, "missing \"edges\""))?;
            let mut edges = Vec::new();
            for e in cg.edges() {
                let epath = format!("{cpath}/{}", e.id);
                let d = ev.get(&e.id).ok_or_else(|| Error::parse(&epath, "no data for edge"))?;
                let field = |k: &str| d.get(k).ok_or_else(|| Error::parse(&epath, format!("missing \"{k}\"")));
                edges.push(K1Edge {
                    annulus: Annulus::from_json_value(field("annulus")?, cfg, &epath)?,
                    g: k1_function(field("g")?, cfg, &epath)?,
                    h_tail: k1_function(field("h_tail")?, cfg, &epath)?,
                    h_head: k1_function(field("h_head")?, cfg, &epath)?,
                    pi1: edge_ref(&gamma1, d.get("pi1"))?,
                    pi2: edge_ref(&gamma2, d.get("pi2"))?,
                });
            }
            curves.push(K1Curve { graph: cg, edges });
        }
        Ok(K1SurfaceInput {
            gamma1,
            gamma2,
            curves,
            alpha,
            betas,
        })
    }
}

/// A function, or `{"tate_theta": {"q", "divisor", "L"}}` for a truncated
/// theta quotient.
fn k1_function(v: &Value, cfg: &PadicConfig, path: &str) -> Result<SplitRationalFunction> {
    let Some(t) = v.get("tate_theta") else {
        return crate::symbols::parse_function(v, cfg, path);
    };
    let q = t
        .get("q")
        .ok_or_else(|| Error::parse(path, "tate_theta needs \"q\""))
        .and_then(|q| parse_literal(q, cfg).map_err(|e| Error::parse(path, e.to_string())))?;
    let l = t.get("L").and_then(Value::as_u64).unwrap_or(8) as usize;
    let factor = TateFactor::from_json_value(&json!({ "theta": t.get("divisor").cloned().unwrap_or(Value::Null) }), cfg, path)?;
    factor.realize(cfg, &q, l)
}

/// `value(beta, alpha) = prod_j prod_e t_e(g_j, h^{tail e})^{beta(pi_1 e)}`.
pub fn k1_surface_regulator(input: &K1SurfaceInput, cfg: &PadicConfig) -> Result<K1Regulator> {
    let context = input.validate(cfg)?;
    let mut symbols: Vec<(PadicNumber, usize, i8)> = Vec::new();
    for c in &input.curves {
        for e in &c.edges {
            symbols.push((annulus_symbol(&e.g, &e.h_tail, &e.annulus)?, e.pi1.0, e.pi1.1));
        }
    }
    let values = input
        .betas
        .iter()
        .map(|beta| {
            let mut acc = cfg.int(1);
            for (t, k, s) in &symbols {
                let w = signed(beta[*k], *s);
                if w != 0 {
                    acc = &acc * &t.pow(w as i64)?;
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(K1Regulator { values, context })
}

/// Scales the `h`-data over vertex `v` of `Gamma_2` by `c` and compares.
pub fn k1_normalization_invariance_check(
    input: &K1SurfaceInput,
    cfg: &PadicConfig,
    v: usize,
    c: &PadicNumber,
) -> Result<CheckLine> {
    let before = k1_surface_regulator(input, cfg)?;
    let after = k1_surface_regulator(&input.scale_vertex(v, c)?, cfg)?;
    let name = format!("k1-normalization[v={},c={c}]", input.gamma2.vertices()[v]);
    for (i, (a, b)) in before.values.iter().zip(&after.values).enumerate() {
        let residual = b.try_div(a)?;
        if !residual.is_one_to(cfg.check_digits()) {
            return Ok(CheckLine::fail(name, format!("beta {i}: residual factor {residual}")));
        }
    }
    Ok(CheckLine::pass(name, "unchanged"))
}

/// Flips edge `e2` of `Gamma_2` and searches `ratio = c^m` with `|m| <= bound`,
/// where `c` is the constant carried by `e2`.
pub fn k1_orientation_change_check(
    input: &K1SurfaceInput,
    cfg: &PadicConfig,
    e2: usize,
    bound: u64,
) -> Result<CheckLine> {
    let before = k1_surface_regulator(input, cfg)?;
    let after = k1_surface_regulator(&input.flip(e2)?, cfg)?;
    let name = format!("k1-orientation[e={}]", input.gamma2.edges()[e2].id);
    let gen = before.context[e2].clone().unwrap_or_else(|| cfg.int(1));
    let digits = cfg.check_digits();
    let mut worst = Status::Pass;
    let mut details = Vec::new();
    for (i, (a, b)) in before.values.iter().zip(&after.values).enumerate() {
        let ratio = a.try_div(b)?;
        let state = if gen.valuation() != Some(0) {
            let jac = toric_jacobian(cfg, 1, vec![vec![gen.clone()]])?;
            jacobian_equal(&jac, std::slice::from_ref(&ratio), &[cfg.int(1)], bound)?
        } else {
            let mut found = TriState::Unequal;
            let mut pw = cfg.int(1);
            let inv = gen.inverse()?;
            let mut pw_inv = cfg.int(1);
            for _ in 0..=bound {
                if ratio.approx_eq(&pw, digits) || ratio.approx_eq(&pw_inv, digits) {
                    found = TriState::Equal;
                    break;
                }
                pw = &pw * &gen;
                pw_inv = &pw_inv * &inv;
            }
            if found != TriState::Equal && !gen.is_one_to(digits) {
                found = TriState::Undecided;
            }
            found
        };
        let status = match state {
            TriState::Equal => Status::Pass,
            TriState::Unequal => Status::Fail,
            TriState::Undecided => Status::Undecided,
        };
        details.push(format!("beta {i}: ratio {ratio} {state:?}"));
        worst = match (worst, status) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Undecided, _) | (_, Status::Undecided) => Status::Undecided,
            _ => Status::Pass,
        };
    }
    Ok(CheckLine::new(name, worst, details.join("; ")))
}

/// Toy datum over `E_{p^2}` and `E_p`: `Gamma_1 = Gamma_C` is the 2-cycle,
/// `Gamma_2` a loop, `pi_1 = id`, `g` the theta quotient with divisor
/// `2(p) - 2(1)` truncated at `l`, and `h` the branches `z, z/p, z/p^2`.
pub fn k1_tate_toy(cfg: &PadicConfig, betas: Vec<Vec<i128>>, l: usize) -> Result<K1SurfaceInput> {
    let p = cfg.int(cfg.prime as i64);
    let q = &p * &p;
    let g = tate_theta_function(cfg, &q, &[(p.clone(), 2), (cfg.int(1), -2)], l)?;
    let z = SplitRationalFunction::z(cfg);
    let branch = |k: i64| -> Result<SplitRationalFunction> {
        z.mul(&SplitRationalFunction::constant(p.pow(-k)?)?)
    };
    let c2 = crate::graph::named::cycle(2);
    let edges = vec![
        K1Edge {
            annulus: Annulus::at_zero(cfg.prime, 0, 1)?,
            g: g.clone(),
            h_tail: branch(0)?,
            h_head: branch(1)?,
            pi1: (0, 1),
            pi2: (0, 1),
        },
        K1Edge {
            annulus: Annulus::at_zero(cfg.prime, 1, 2)?,
            g,
            h_tail: branch(1)?,
            h_head: branch(2)?,
            pi1: (1, 1),
            pi2: (0, 1),
        },
    ];
    Ok(K1SurfaceInput {
        gamma1: c2.clone(),
        gamma2: crate::graph::named::loop_graph(),
        curves: vec![K1Curve { graph: c2, edges }],
        alpha: vec![1],
        betas,
    })
}

/// Harmonic representative of the class of `c`, scaled to be integral.
/// Returns the representative and the multiplier.
pub fn harmonic_representative(g: &Graph, c: &[i128]) -> Result<(Vec<i128>, i128)> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};

    let basis = crate::graph::harmonic_basis(g);
    let r = basis.len();
    if r == 0 {
        return Ok((vec![0; c.len()], 1));
    }
    let q = |x: i128| BigRational::from_integer(BigInt::from(x));
    let dot = |a: &[i128], b: &[i128]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i128>();
    let mut m: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..r).map(|j| q(dot(&basis[i], &basis[j]))).collect();
            row.push(q(dot(&basis[i], c)));
            row
        })
        .collect();
    for col in 0..r {
        let piv = (col..r)
            .find(|&i| !m[i][col].is_zero())
            .ok_or_else(|| Error::Contract("harmonic basis is degenerate".into()))?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x / &p;
        }
        for i in 0..r {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for k in col..=r {
                    let d = &f * &m[col][k];
                    m[i][k] = &m[i][k] - d;
                }
            }
        }
    }
    let coeffs: Vec<BigRational> = m.iter().map(|row| row[r].clone()).collect();
    let h: Vec<BigRational> = (0..c.len())
        .map(|e| coeffs.iter().zip(&basis).fold(BigRational::zero(), |acc, (x, b)| acc + x * q(b[e])))
        .collect();
    let mult = h.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let out = h
        .iter()
        .map(|x| {
            (x * BigRational::from_integer(mult.clone()))
                .to_integer()
                .to_i128()
                .ok_or_else(|| Error::Domain("harmonic representative overflows".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mult = mult.to_i128().ok_or_else(|| Error::Domain("multiplier overflows".into()))?;
    Ok((out, mult))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{annulus_degree, rat};

    fn cfg() -> PadicConfig {
        PadicConfig::new(5, 12).unwrap().with_slack(3).unwrap()
    }

    fn tate_setup() -> (PadicConfig, PadicNumber, AnnulusDecomposedCurve, Vec<TateK2Input>) {
        let c = cfg();
        let q = c.int(25);
        let curve = AnnulusDecomposedCurve::tate(&c, &q).unwrap();
        let i = crate::mumford::padic_sqrt(&c.int(-1), &c).unwrap();
        let five = c.int(5);
        let inputs = vec![
            tate_torsion_symbol(&c, &q, &c.int(-1), &five, 2),
            tate_torsion_symbol(&c, &q, &i, &c.int(-1), 4),
            tate_torsion_symbol(&c, &q, &i, &five, 4),
            tate_torsion_symbol(&c, &q, &-&i, &(&i * &five), 4),
            tate_torsion_symbol(&c, &q, &five, &-&(&i * &five), 4),
            tate_torsion_symbol(&c, &q, &(&i * &five), &i, 4),
        ];
        (c, q, curve, inputs)
    }

    #[test]
    fn tate_regulator_is_constant_and_nontrivial() {
        let (c, _, curve, inputs) = tate_setup();
        let mut nontrivial = 0;
        for input in &inputs {
            let reg = k2_tate_regulator(&c, &curve, input).unwrap();
            assert!(reg.cochain[0].approx_eq(&reg.cochain[1], c.check_digits()));
            assert_eq!(reg.valuations(), vec![Some(0), Some(0)]);
            let class = reg.tate_class.unwrap();
            assert_eq!(class.witness, vec![0]);
            if !reg.cochain[0].is_one_to(c.check_digits()) {
                nontrivial += 1;
            }
        }
        assert!(nontrivial >= 4);
    }

    #[test]
    fn subdivision_keeps_the_class() {
        let (c, _, curve, inputs) = tate_setup();
        let fine = curve.subdivide(0, rat(1, 2)).unwrap();
        assert_eq!(fine.graph.num_edges(), 3);
        for input in &inputs[1..3] {
            let a = k2_tate_regulator(&c, &curve, input).unwrap();
            let b = k2_tate_regulator(&c, &fine, input).unwrap();
            for x in &b.cochain {
                assert!(x.approx_eq(&a.cochain[0], c.check_digits()));
            }
        }
    }

    #[test]
    fn log_of_regulator_is_sum_of_logs() {
        let (c, _, curve, inputs) = tate_setup();
        let k2 = inputs[2].at_truncation(&c, 8).unwrap();
        assert!(log_identity_holds(&curve, &k2, &c).unwrap());
    }

    #[test]
    fn bilinear_and_orientation() {
        let (c, _, curve, inputs) = tate_setup();
        let a = inputs[1].at_truncation(&c, 8).unwrap();
        let b = inputs[2].at_truncation(&c, 8).unwrap();
        let ra = k2_regulator(&curve, &a, &c).unwrap();
        let rb = k2_regulator(&curve, &b, &c).unwrap();
        let rab = k2_regulator(&curve, &a.concat(&b).unwrap(), &c).unwrap();
        for k in 0..2 {
            assert!(rab.cochain[k].approx_eq(&(&ra.cochain[k] * &rb.cochain[k]), c.check_digits()));
        }
        let mut flipped = curve.clone();
        flipped.charts[1] = flipped.charts[1].reversed();
        let raw = k2_cochain(&flipped, &a, &c).unwrap();
        assert!((&raw[1] * &ra.cochain[1]).is_one_to(c.check_digits()));
    }

    #[test]
    fn trivial_and_error_paths() {
        let c = cfg();
        let q = c.int(25);
        let curve = AnnulusDecomposedCurve::tate(&c, &q).unwrap();
        let k = |n| SplitRationalFunction::constant(c.int(n)).unwrap();
        let reg = k2_regulator(&curve, &K2Input::global(SymbolElement::new(vec![(k(3), k(7), 1)])), &c).unwrap();
        assert!(reg.cochain.iter().all(|x| x.is_one_to(c.check_digits())));

        let f = SplitRationalFunction::parse_expr("(z-5)*(z-1)^-1", &c).unwrap();
        let err = k2_regulator(&curve, &K2Input::global(SymbolElement::new(vec![(f, k(3), 1)])), &c).unwrap_err();
        match err {
            Error::NotInK2(pts) => assert_eq!(pts.len(), 2),
            other => panic!("unexpected {other}"),
        }

        let f = SplitRationalFunction::parse_expr("2*(z-5)*(z-25)^-1", &c).unwrap();
        let g = SplitRationalFunction::parse_expr("-1*(z+15)*(z-25)^-1", &c).unwrap();
        let reg = k2_regulator(&curve, &K2Input::global(SymbolElement::new(vec![(f, g, 1)])), &c).unwrap();
        assert!(reg.cochain.iter().all(|x| x.is_one_to(c.check_digits())));
    }

    #[test]
    fn theta_restrictions() {
        let c = cfg();
        let q = c.int(25);
        let r = k2_tate_theta_restrict(&c, &q, &[], 4).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|f| f.is_constant() && f.leading_constant().is_one_to(12)));
        let d = [(c.int(2), 1), (c.int(3), -1)];
        let curve = AnnulusDecomposedCurve::tate(&c, &q).unwrap();
        for l in [3, 4, 7] {
            let r = k2_tate_theta_restrict(&c, &q, &d, l).unwrap();
            for (f, e) in r.iter().zip(&curve.charts) {
                assert_eq!(annulus_degree(f, e).unwrap(), 0);
            }
        }
        assert!(k2_tate_theta_restrict(&c, &q, &[(c.int(2), 1)], 3).is_err());
        let f = tate_theta_function(&c, &q, &[(c.int(5), 2), (c.int(1), -2)], 6).unwrap();
        let degs: Vec<i64> = curve.charts.iter().map(|e| annulus_degree(&f, e).unwrap()).collect();
        assert_eq!(degs, vec![1, -1]);
    }

    #[test]
    fn k1_toy_well_defined() {
        let c = cfg();
        let input = k1_tate_toy(&c, vec![vec![1, 1], vec![0, 0]], 8).unwrap();
        let reg = k1_surface_regulator(&input, &c).unwrap();
        assert!(reg.context[0].as_ref().unwrap().approx_eq(&c.int(5), 12));
        assert!(reg.values[1].is_one_to(12));
        assert!(!reg.values[0].is_one_to(c.check_digits()));
        for k in [1, 6, -3, 26] {
            let line = k1_normalization_invariance_check(&input, &c, 0, &c.int(k)).unwrap();
            assert!(line.passed(), "{line}");
        }
        let line = k1_orientation_change_check(&input, &c, 0, 5).unwrap();
        assert!(line.passed(), "{line}");
    }

    #[test]
    fn k1_negative_controls() {
        let c = cfg();
        let input = k1_tate_toy(&c, vec![vec![1, 0]], 8).unwrap();
        let line = k1_normalization_invariance_check(&input, &c, 0, &c.int(6)).unwrap();
        assert_eq!(line.status, Status::Fail);
        let line = k1_orientation_change_check(&input, &c, 0, 5).unwrap();
        assert_eq!(line.status, Status::Pass, "{line}");
        let line = k1_orientation_change_check(&input, &c, 0, 0).unwrap();
        assert_eq!(line.status, Status::Undecided, "{line}");
    }

    #[test]
    fn k1_single_edge_is_annulus_symbol() {
        let c = cfg();
        let mut input = k1_tate_toy(&c, vec![vec![1, 0]], 8).unwrap();
        input.curves[0].edges[1].pi1 = (1, 1);
        let reg = k1_surface_regulator(&input, &c).unwrap();
        let e = &input.curves[0].edges[0];
        let t = annulus_symbol(&e.g, &e.h_tail, &e.annulus).unwrap();
        assert!(reg.values[0].approx_eq(&t, 12));
    }

    #[test]
    fn harmonic_projection() {
        let g = crate::graph::named::cycle(3);
        let (h, m) = harmonic_representative(&g, &[1, 0, 0]).unwrap();
        assert_eq!((h, m), (vec![1, 1, 1], 3));
        let (h, m) = harmonic_representative(&crate::graph::named::path(3), &[4, -1]).unwrap();
        assert_eq!((h, m), (vec![0, 0], 1));
    }
}
