//! Tame symbols at points of `P^1`, annulus symbols and degrees for split
//! rational functions, and the residue theorem.
//!
//! An annulus `{a < v(z - center) < b}` with the default orientation has
//! inside `{v(z - center) >= b}` (the high-valuation side, boundary
//! included). With the reversed orientation the inside is the other
//! complementary disc `{v(z - center) <= a} + {inf}`.

use std::fmt;

use num_rational::Rational64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::padic::{PadicConfig, PadicNumber};

#[derive(Clone, Debug)]
pub enum Point {
    Finite(PadicNumber),
    Infinity,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(x) => write!(f, "{x}"),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

/// `c * prod (z - a_i)^{m_i}` with distinct roots `a_i` in `K`.
#[derive(Clone, Debug)]
pub struct SplitRationalFunction {
    constant: PadicNumber,
    divisor: Vec<(PadicNumber, i64)>,
}

fn same_point(a: &PadicNumber, b: &PadicNumber) -> bool {
    (a - b).is_zero()
}

impl SplitRationalFunction {
    pub fn new(constant: PadicNumber, divisor: Vec<(PadicNumber, i64)>) -> Result<Self> {
        if constant.is_zero() {
            return Err(Error::Domain("constant of a rational function must be nonzero".into()));
        }
        let mut out: Vec<(PadicNumber, i64)> = Vec::with_capacity(divisor.len());
        for (a, m) in divisor {
            if m == 0 {
                continue;
            }
            if out.iter().any(|(b, _)| same_point(&a, b)) {
                return Err(Error::Domain(format!("repeated root {a}")));
            }
            out.push((a, m));
        }
        Ok(SplitRationalFunction {
            constant,
            divisor: out,
        })
    }

    pub fn constant(c: PadicNumber) -> Result<Self> {
        Self::new(c, Vec::new())
    }

    /// The coordinate function `z`.
    pub fn z(cfg: &PadicConfig) -> Self {
        Self::linear(cfg, PadicNumber::exact_zero(cfg.prime))
    }

    /// `z - a`.
    pub fn linear(cfg: &PadicConfig, a: PadicNumber) -> Self {
        SplitRationalFunction {
            constant: cfg.int(1),
            divisor: vec![(a, 1)],
        }
    }

    pub fn leading_constant(&self) -> &PadicNumber {
        &self.constant
    }

    pub fn divisor(&self) -> &[(PadicNumber, i64)] {
        &self.divisor
    }

    pub fn prime(&self) -> u32 {
        self.constant.prime()
    }

    pub fn is_constant(&self) -> bool {
        self.divisor.is_empty()
    }

    pub fn ord_infinity(&self) -> i64 {
        -self.divisor.iter().map(|(_, m)| m).sum::<i64>()
    }

    pub fn ord_at(&self, x: &Point) -> i64 {
        match x {
            Point::Infinity => self.ord_infinity(),
            Point::Finite(x) => self
                .divisor
                .iter()
                .find(|(a, _)| same_point(a, x))
                .map_or(0, |(_, m)| *m),
        }
    }

    /// Leading coefficient of `f` at `x` with respect to the uniformizer
    /// `z - x` (or `1/z` at infinity).
    pub fn unit_at(&self, x: &Point) -> Result<PadicNumber> {
        match x {
            Point::Infinity => Ok(self.constant.clone()),
            Point::Finite(x) => {
                let mut acc = self.constant.clone();
                for (a, m) in &self.divisor {
                    if same_point(a, x) {
                        continue;
                    }
                    let diff = x - a;
                    let f = diff
                        .pow(*m)
                        .map_err(|_| Error::Precision(format!("evaluation at {x} hits a zero to precision")))?;
                    acc = &acc * &f;
                }
                Ok(acc)
            }
        }
    }

    /// `f(x)` for a point that is neither a zero nor a pole.
    pub fn eval(&self, x: &PadicNumber) -> Result<PadicNumber> {
        if self.ord_at(&Point::Finite(x.clone())) != 0 {
            return Err(Error::Domain(format!("{x} is a zero or pole")));
        }
        self.unit_at(&Point::Finite(x.clone()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut div = self.divisor.clone();
        for (b, n) in &other.divisor {
            if let Some(slot) = div.iter_mut().find(|(a, _)| same_point(a, b)) {
                slot.1 += n;
            } else {
                div.push((b.clone(), *n));
            }
        }
        div.retain(|(_, m)| *m != 0);
        Self::new(&self.constant * &other.constant, div)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Self::constant(PadicNumber::one(self.prime(), self.constant.relative_precision().unwrap_or(1)));
        }
        Self::new(
            self.constant.pow(k)?,
            self.divisor.iter().map(|(a, m)| (a.clone(), m * k)).collect(),
        )
    }

    pub fn inverse(&self) -> Result<Self> {
        self.pow(-1)
    }

    /// Support of the divisor including infinity when `ord_inf != 0`.
    pub fn support(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = self.divisor.iter().map(|(a, _)| Point::Finite(a.clone())).collect();
        if self.ord_infinity() != 0 {
            pts.push(Point::Infinity);
        }
        pts
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let div: Vec<_> = self
            .divisor
            .iter()
            .map(|(a, m)| json!({"root": a.to_string(), "mult": m}))
            .collect();
        json!({"constant": self.constant.to_string(), "divisor": div})
    }

    pub fn from_json_value(v: &serde_json::Value, cfg: &PadicConfig, path: &str) -> Result<Self> {
        let err = |m: String| Error::parse(path, m);
        let c = v
            .get("constant")
            .ok_or_else(|| err("missing \"constant\"".into()))?;
        let constant = parse_literal(c, cfg).map_err(|e| err(format!("constant: {e}")))?;
        let mut div = Vec::new();
        let mut inf: Option<i64> = None;
        if let Some(list) = v.get("divisor") {
            let list = list.as_array().ok_or_else(|| err("\"divisor\" must be an array".into()))?;
            for (n, item) in list.iter().enumerate() {
                let m = item
                    .get("mult")
                    .and_then(|m| m.as_i64())
                    .ok_or_else(|| err(format!("divisor[{n}]: missing integer \"mult\"")))?;
                let r = item
                    .get("root")
                    .ok_or_else(|| err(format!("divisor[{n}]: missing \"root\"")))?;
                if r.as_str() == Some("inf") {
                    inf = Some(m);
                } else {
                    let a = parse_literal(r, cfg).map_err(|e| err(format!("divisor[{n}].root: {e}")))?;
                    div.push((a, m));
                }
            }
        }
        let f = Self::new(constant, div).map_err(|e| err(e.to_string()))?;
        if let Some(m) = inf {
            if m != f.ord_infinity() {
                return Err(err(format!(
                    "declared order {m} at inf disagrees with the degree ({})",
                    f.ord_infinity()
                )));
            }
        }
        Ok(f)
    }

    /// Parses products of factors such as `3*z*(z-5)^2*(z+1/5)^-1`.
    pub fn parse_expr(text: &str, cfg: &PadicConfig) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |m: &str| Error::parse("<expr>", format!("{m}: {text:?}"));
        if s.is_empty() {
            return Err(err("empty expression"));
        }
        let mut f = Self::constant(cfg.int(1))?;
        for factor in split_top_level(&s, '*') {
            let (base, exp) = match factor.rfind('^') {
                Some(pos) if factor[..pos].ends_with(')') || &factor[..pos] == "z" => {
                    let e: i64 = factor[pos + 1..]
                        .trim_matches(|c| c == '(' || c == ')')
                        .parse()
                        .map_err(|_| err("bad exponent"))?;
                    (&factor[..pos], e)
                }
                _ => (factor.as_str(), 1),
            };
            let base = base.strip_prefix('(').and_then(|b| b.strip_suffix(')')).unwrap_or(base);
            let term = if base == "z" {
                Self::z(cfg)
            } else if let Some(rest) = base.strip_prefix("z-") {
                Self::linear(cfg, cfg.parse(rest)?)
            } else if let Some(rest) = base.strip_prefix("z+") {
                Self::linear(cfg, -cfg.parse(rest)?)
            } else {
                Self::constant(cfg.parse(base)?)?
            };
            f = f.mul(&term.pow(exp)?)?;
        }
        Ok(f)
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if ch == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    out.push(cur);
    out
}

/// A p-adic literal given as a JSON string or integer.
pub fn parse_literal(v: &serde_json::Value, cfg: &PadicConfig) -> Result<PadicNumber> {
    match v {
        serde_json::Value::String(s) => cfg.parse(s),
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(|k| cfg.int(k))
            .ok_or_else(|| Error::parse("<literal>", format!("non-integer number {n}"))),
        _ => Err(Error::parse("<literal>", format!("expected string or integer, got {v}"))),
    }
}

/// `t_x(f, g) = (-1)^{mn} (f^n / g^m)(x)` with `m = ord_x f`, `n = ord_x g`.
pub fn tame_symbol(f: &SplitRationalFunction, g: &SplitRationalFunction, x: &Point) -> Result<PadicNumber> {
    let m = f.ord_at(x);
    let n = g.ord_at(x);
    let uf = f.unit_at(x)?.pow(n)?;
    let ug = g.unit_at(x)?.pow(m)?;
    let mut t = uf.try_div(&ug)?;
    if (m * n) % 2 != 0 {
        t = -t;
    }
    Ok(t)
}

#[derive(Clone, Debug)]
pub struct Annulus {
    pub center: PadicNumber,
    pub a: Rational64,
    pub b: Rational64,
    /// True when the inside is the high-valuation side.
    pub inside_high: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    High,
    Open,
    Low,
}

impl Annulus {
    pub fn new(center: PadicNumber, a: Rational64, b: Rational64) -> Result<Self> {
        if a >= b {
            return Err(Error::Domain(format!("annulus needs a < b, got ({a}, {b})")));
        }
        Ok(Annulus {
            center,
            a,
            b,
            inside_high: true,
        })
    }

    /// `{a < v(z) < b}` centered at zero.
    pub fn at_zero(prime: u32, a: i64, b: i64) -> Result<Self> {
        Self::new(PadicNumber::exact_zero(prime), Rational64::from_integer(a), Rational64::from_integer(b))
    }

    pub fn reversed(&self) -> Self {
        Annulus {
            inside_high: !self.inside_high,
            ..self.clone()
        }
    }

    pub fn side(&self, x: &Point) -> Result<Side> {
        let Point::Finite(x) = x else { return Ok(Side::Low) };
        let d = x - &self.center;
        if d.is_exact_zero() {
            return Ok(Side::High);
        }
        match d.valuation() {
            Some(v) => {
                let v = Rational64::from_integer(v);
                Ok(if v >= self.b {
                    Side::High
                } else if v <= self.a {
                    Side::Low
                } else {
                    Side::Open
                })
            }
            None => {
                let abs = d.absolute_precision().unwrap_or(i64::MAX);
                if Rational64::from_integer(abs) >= self.b {
                    Ok(Side::High)
                } else {
                    Err(Error::Precision(format!("cannot place {x} relative to the annulus")))
                }
            }
        }
    }

    pub fn is_inside(&self, x: &Point) -> Result<bool> {
        Ok(match self.side(x)? {
            Side::High => self.inside_high,
            Side::Low => !self.inside_high,
            Side::Open => false,
        })
    }

    fn check_invertible(&self, f: &SplitRationalFunction) -> Result<()> {
        for (a, _) in f.divisor() {
            if self.side(&Point::Finite(a.clone()))? == Side::Open {
                return Err(Error::NotInvertible(format!("root {a} lies in the open annulus")));
            }
        }
        Ok(())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "center": self.center.to_string(),
            "a": self.a.to_string(),
            "b": self.b.to_string(),
            "orientation": if self.inside_high { "+1" } else { "-1" },
        })
    }

    pub fn from_json_value(v: &serde_json::Value, cfg: &PadicConfig, path: &str) -> Result<Self> {
        let err = |m: String| Error::parse(path, m);
        let center = match v.get("center") {
            Some(c) => parse_literal(c, cfg).map_err(|e| err(format!("center: {e}")))?,
            None => PadicNumber::exact_zero(cfg.prime),
        };
        let rat = |key: &str| -> Result<Rational64> {
            let x = v.get(key).ok_or_else(|| err(format!("missing \"{key}\"")))?;
            parse_rational(x).map_err(|e| err(format!("{key}: {e}")))
        };
        let mut ann = Annulus::new(center, rat("a")?, rat("b")?).map_err(|e| err(e.to_string()))?;
        if let Some(o) = v.get("orientation") {
            let s = o.as_str().map(str::to_string).unwrap_or_else(|| o.to_string());
            ann.inside_high = match s.as_str() {
                "+1" | "1" | "+" => true,
                "-1" | "-" => false,
                other => return Err(err(format!("orientation must be +1 or -1, got {other}"))),
            };
        }
        Ok(ann)
    }
}

pub fn parse_rational(v: &serde_json::Value) -> Result<Rational64> {
    let s = match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) => n.to_string(),
        _ => return Err(Error::parse("<rational>", format!("expected rational, got {v}"))),
    };
    let parsed = match s.split_once('/') {
        Some((a, b)) => a.trim().parse::<i64>().ok().zip(b.trim().parse::<i64>().ok()),
        None => s.trim().parse::<i64>().ok().map(|a| (a, 1)),
    };
    match parsed {
        Some((_, 0)) | None => Err(Error::parse("<rational>", format!("bad rational {s:?}"))),
        Some((a, b)) => Ok(Rational64::new(a, b)),
    }
}

/// Points where `f` or `g` has a zero or pole, finite points first.
fn joint_support(f: &SplitRationalFunction, g: &SplitRationalFunction) -> Vec<Point> {
    let mut pts: Vec<PadicNumber> = Vec::new();
    for (a, _) in f.divisor().iter().chain(g.divisor()) {
        if !pts.iter().any(|b| same_point(a, b)) {
            pts.push(a.clone());
        }
    }
    let mut out: Vec<Point> = pts.into_iter().map(Point::Finite).collect();
    if f.ord_infinity() != 0 || g.ord_infinity() != 0 {
        out.push(Point::Infinity);
    }
    out
}

/// Sum of multiplicities of `f` on the inside of `e`.
pub fn annulus_degree(f: &SplitRationalFunction, e: &Annulus) -> Result<i64> {
    e.check_invertible(f)?;
    let mut deg = 0;
    for x in f.support() {
        if e.is_inside(&x)? {
            deg += f.ord_at(&x);
        }
    }
    Ok(deg)
}

/// `t_e(f, g)`: product of tame symbols over the inside of `e`.
pub fn annulus_symbol(f: &SplitRationalFunction, g: &SplitRationalFunction, e: &Annulus) -> Result<PadicNumber> {
    e.check_invertible(f)?;
    e.check_invertible(g)?;
    let mut acc = PadicNumber::one(f.prime(), symbol_precision(f, g));
    for x in joint_support(f, g) {
        if e.is_inside(&x)? {
            acc = &acc * &tame_symbol(f, g, &x)?;
        }
    }
    Ok(acc)
}

/// Per-point tame symbols on the inside of `e`, for callers that need the factors.
pub fn annulus_symbol_factors(
    f: &SplitRationalFunction,
    g: &SplitRationalFunction,
    e: &Annulus,
) -> Result<Vec<(Point, PadicNumber)>> {
    e.check_invertible(f)?;
    e.check_invertible(g)?;
    let mut out = Vec::new();
    for x in joint_support(f, g) {
        if e.is_inside(&x)? {
            let t = tame_symbol(f, g, &x)?;
            out.push((x, t));
        }
    }
    Ok(out)
}

fn symbol_precision(f: &SplitRationalFunction, g: &SplitRationalFunction) -> u32 {
    let a = f.leading_constant().relative_precision().unwrap_or(1);
    let b = g.leading_constant().relative_precision().unwrap_or(1);
    a.max(b)
}

/// `prod_{x in U} t_x(f,g) * prod_i t_{e_i}(f,g)`, where the closed discs
/// `{v(z - c_i) >= b_i}` are removed and `U` is the rest of `P^1`.
pub fn residue_theorem_check(
    f: &SplitRationalFunction,
    g: &SplitRationalFunction,
    boundary: &[Annulus],
) -> Result<PadicNumber> {
    for (i, e) in boundary.iter().enumerate() {
        if !e.inside_high {
            return Err(Error::Domain(format!("boundary annulus {i} must be oriented towards its disc")));
        }
        for (j, o) in boundary.iter().enumerate().skip(i + 1) {
            let d = &e.center - &o.center;
            let overlap = match d.valuation() {
                None => true,
                Some(v) => Rational64::from_integer(v) >= e.b.min(o.b),
            };
            if overlap {
                return Err(Error::Domain(format!("removed discs {i} and {j} overlap")));
            }
        }
    }
    let mut acc = PadicNumber::one(f.prime(), symbol_precision(f, g));
    for e in boundary {
        acc = &acc * &annulus_symbol(f, g, e)?;
    }
    'points: for x in joint_support(f, g) {
        for e in boundary {
            if e.side(&x)? == Side::High {
                continue 'points;
            }
        }
        acc = &acc * &tame_symbol(f, g, &x)?;
    }
    Ok(acc)
}

/// `sum n_i {f_i, g_i}`.
#[derive(Clone, Debug, Default)]
pub struct SymbolElement {
    pub terms: Vec<(SplitRationalFunction, SplitRationalFunction, i64)>,
}

impl SymbolElement {
    pub fn new(terms: Vec<(SplitRationalFunction, SplitRationalFunction, i64)>) -> Self {
        SymbolElement { terms }
    }

    pub fn concat(&self, other: &SymbolElement) -> SymbolElement {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        SymbolElement { terms }
    }
}

/// The annulus of one edge with optional per-edge restrictions of every
/// term of a symbol element.
#[derive(Clone, Debug)]
pub struct EdgeChart {
    pub annulus: Annulus,
    pub restrictions: Option<Vec<(SplitRationalFunction, SplitRationalFunction)>>,
}

/// `e -> prod_i t_e(f_i, g_i)^{n_i}`.
pub fn symbol_cochain(sym: &SymbolElement, charts: &[EdgeChart], cfg: &PadicConfig) -> Result<Vec<PadicNumber>> {
    charts
        .iter()
        .enumerate()
        .map(|(k, chart)| {
            let mut acc = cfg.int(1);
            for (i, (f, g, n)) in sym.terms.iter().enumerate() {
                if *n == 0 {
                    continue;
                }
                let (fe, ge) = match &chart.restrictions {
                    Some(r) => {
                        let pair = r.get(i).ok_or_else(|| {
                            Error::Contract(format!("edge {k}: no restriction for symbol term {i}"))
                        })?;
                        (&pair.0, &pair.1)
                    }
                    None => (f, g),
                };
                acc = &acc * &annulus_symbol(fe, ge, &chart.annulus)?.pow(*n)?;
            }
            Ok(acc)
        })
        .collect()
}

/// A function given either as an expression string or as the
/// `{"constant", "divisor"}` object.
pub fn parse_function(v: &serde_json::Value, cfg: &PadicConfig, path: &str) -> Result<SplitRationalFunction> {
    match v {
        serde_json::Value::String(s) => {
            SplitRationalFunction::parse_expr(s, cfg).map_err(|e| Error::parse(path, e.to_string()))
        }
        _ => SplitRationalFunction::from_json_value(v, cfg, path),
    }
}

/// A point given as a p-adic literal or `"inf"`.
pub fn parse_point(v: &serde_json::Value, cfg: &PadicConfig, path: &str) -> Result<Point> {
    if v.as_str() == Some("inf") {
        return Ok(Point::Infinity);
    }
    parse_literal(v, cfg)
        .map(Point::Finite)
        .map_err(|e| Error::parse(path, e.to_string()))
}

/// Rational number helper used by callers building annuli.
pub fn rat(n: i64, d: i64) -> Rational64 {
    if d == 1 {
        Rational64::from_integer(n)
    } else {
        Rational64::new(n, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> PadicConfig {
        PadicConfig::new(5, 20).unwrap()
    }

    fn z() -> SplitRationalFunction {
        SplitRationalFunction::z(&cfg())
    }

    fn lin(a: i64) -> SplitRationalFunction {
        SplitRationalFunction::linear(&cfg(), cfg().int(a))
    }

    #[test]
    fn orders() {
        let c = cfg();
        assert_eq!(z().ord_at(&Point::Finite(c.int(0))), 1);
        assert_eq!(z().ord_at(&Point::Infinity), -1);
        let f = SplitRationalFunction::new(c.int(5), vec![(c.int(1), 2), (c.int(6), -2)]).unwrap();
        assert_eq!(f.ord_at(&Point::Infinity), 0);
    }

    #[test]
    fn tame_symbol_examples() {
        let c = cfg();
        let t = tame_symbol(&z(), &lin(5), &Point::Finite(c.int(0))).unwrap();
        assert_eq!(t, c.rational(-1, 5));
        let one = tame_symbol(&lin(2), &lin(3), &Point::Finite(c.int(7))).unwrap();
        assert_eq!(one, c.int(1));
    }

    #[test]
    fn annulus_examples() {
        let c = cfg();
        let e = Annulus::at_zero(5, 0, 1).unwrap();
        assert_eq!(annulus_degree(&z(), &e).unwrap(), 1);
        assert_eq!(annulus_degree(&SplitRationalFunction::constant(c.int(3)).unwrap(), &e).unwrap(), 0);
        let f = SplitRationalFunction::new(c.int(1), vec![(c.int(5), 1), (c.rational(1, 5), -1)]).unwrap();
        let e2 = Annulus::at_zero(5, -1, 1).unwrap();
        assert_eq!(annulus_degree(&f, &e2).unwrap(), 1);
        assert_eq!(annulus_degree(&f, &e2.reversed()).unwrap(), -1);
        assert_eq!(annulus_symbol(&z(), &lin(5), &e).unwrap(), c.int(-1));
        let rev = annulus_symbol(&z(), &lin(5), &e.reversed()).unwrap();
        assert_eq!(rev, c.int(-1).inverse().unwrap());
    }

    #[test]
    fn not_invertible_in_open_annulus() {
        let e = Annulus::at_zero(5, 0, 2).unwrap();
        assert!(matches!(annulus_degree(&lin(5), &e), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn residue_examples() {
        let c = cfg();
        let e = Annulus::at_zero(5, 0, 1).unwrap();
        let r = residue_theorem_check(&z(), &lin(1), std::slice::from_ref(&e)).unwrap();
        assert_eq!(r, c.int(1));
        let k1 = SplitRationalFunction::constant(c.int(3)).unwrap();
        let k2 = SplitRationalFunction::constant(c.int(7)).unwrap();
        assert_eq!(residue_theorem_check(&k1, &k2, std::slice::from_ref(&e)).unwrap(), c.int(1));
        let e2 = Annulus::new(c.int(5), rat(1, 1), rat(2, 1)).unwrap();
        assert!(matches!(residue_theorem_check(&z(), &lin(1), &[e, e2]), Err(Error::Domain(_))));
    }

    #[test]
    fn parse_expressions() {
        let c = cfg();
        let f = SplitRationalFunction::parse_expr("z-5", &c).unwrap();
        assert_eq!(f.ord_at(&Point::Finite(c.int(5))), 1);
        let g = SplitRationalFunction::parse_expr("5*(z-1)^2*(z-6)^-2", &c).unwrap();
        assert_eq!(g.ord_infinity(), 0);
        assert_eq!(g.ord_at(&Point::Finite(c.int(6))), -2);
        assert_eq!(g.leading_constant(), &c.int(5));
        let h = SplitRationalFunction::parse_expr("z+1/5", &c).unwrap();
        assert_eq!(h.ord_at(&Point::Finite(c.rational(-1, 5))), 1);
        assert!(SplitRationalFunction::parse_expr("", &c).is_err());
    }

    #[test]
    fn json_forms() {
        let c = cfg();
        let v = serde_json::json!({"constant": "2", "divisor": [{"root": "5", "mult": 1}, {"root": "inf", "mult": -1}]});
        let f = SplitRationalFunction::from_json_value(&v, &c, "f.json").unwrap();
        assert_eq!(f.ord_infinity(), -1);
        let bad = serde_json::json!({"constant": "2", "divisor": [{"root": "5", "mult": 1}, {"root": "inf", "mult": 3}]});
        assert!(SplitRationalFunction::from_json_value(&bad, &c, "f.json").is_err());
        let a = serde_json::json!({"center": "0", "a": "0", "b": "1/2", "orientation": "-1"});
        let ann = Annulus::from_json_value(&a, &c, "a.json").unwrap();
        assert!(!ann.inside_high);
        assert_eq!(ann.b, rat(1, 2));
    }

    #[test]
    fn constant_symbol_matches_degree() {
        let c = cfg();
        let e = Annulus::at_zero(5, 0, 1).unwrap();
        let f = SplitRationalFunction::new(c.int(2), vec![(c.int(25), 2), (c.int(3), -1), (c.int(10), -1)]).unwrap();
        let k = SplitRationalFunction::constant(c.int(7)).unwrap();
        let deg = annulus_degree(&f, &e).unwrap();
        assert_eq!(deg, 1);
        assert_eq!(annulus_symbol(&k, &f, &e).unwrap(), c.int(7).pow(deg).unwrap());
    }
}
