//! Loading of input files. Errors name the file and the offending path.

use std::path::Path;

use serde_json::Value;
use toric_core::error::{Error, Result};
use toric_core::graph::Graph;
use toric_core::mumford::{parse_word, LiftData, MobiusTransform, ProjPoint, SchottkyGroup, ThetaPoints, Word};
use toric_core::padic::{PadicConfig, PadicNumber};
use toric_core::symbols::{parse_literal, Annulus};
use toric_core::weight::{curve_chow_data, toric_jacobian, StratumChowData, ToricJacobian};

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::parse(path.display().to_string(), format!("cannot read: {e}")))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| {
        Error::parse(
            path.display().to_string(),
            format!("line {}, column {}: {e}", e.line(), e.column()),
        )
    })
}

fn located(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { path: inner, msg } if inner.starts_with('<') || inner.is_empty() => {
            Error::parse(path.display().to_string(), format!("{inner}: {msg}"))
        }
        Error::Parse { path: inner, msg } => Error::parse(format!("{}:{inner}", path.display()), msg),
        other => Error::parse(path.display().to_string(), other.to_string()),
    }
}

pub fn graph_from_value(v: &Value, path: &str) -> Result<Graph> {
    Graph::from_json_str(&v.to_string(), path)
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    Graph::from_json_str(&read_text(path)?, &path.display().to_string())
}

/// A stratum file, or a graph file standing for the curve it is the dual
/// graph of.
pub fn load_chow(path: &Path) -> Result<StratumChowData> {
    let v = read_json(path)?;
    let name = path.display().to_string();
    if v.get("vertices").is_some() {
        Ok(curve_chow_data(&graph_from_value(&v, &name)?))
    } else {
        StratumChowData::from_json_str(&v.to_string(), &name)
    }
}

pub fn literal(v: &Value, cfg: &PadicConfig, at: &str) -> Result<PadicNumber> {
    parse_literal(v, cfg).map_err(|e| Error::parse(at, e.to_string()))
}

/// `{"q": lit}` for the Tate curve, or `{"target_rank": n, "periods": [[lit, ...], ...]}`.
pub fn load_jacobian(path: &Path, cfg: &PadicConfig) -> Result<ToricJacobian> {
    let v = read_json(path)?;
    let at = |k: &str| format!("{}:{k}", path.display());
    if let Some(q) = v.get("q") {
        let q = literal(q, cfg, &at("q"))?;
        return toric_jacobian(cfg, 1, vec![vec![q]]).map_err(|e| located(path, e));
    }
    let rank = v
        .get("target_rank")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::parse(at("target_rank"), "expected \"q\" or a non-negative \"target_rank\""))?;
    let periods = v
        .get("periods")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse(at("periods"), "missing array"))?;
    let mut cols = Vec::new();
    for (j, col) in periods.iter().enumerate() {
        let entries = col
            .as_array()
            .ok_or_else(|| Error::parse(at(&format!("periods/{j}")), "expected an array of literals"))?;
        cols.push(
            entries
                .iter()
                .enumerate()
                .map(|(i, x)| literal(x, cfg, &at(&format!("periods/{j}/{i}"))))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    toric_jacobian(cfg, rank as usize, cols).map_err(|e| located(path, e))
}

/// A literal or an array of literals.
pub fn load_element(path: &Path, cfg: &PadicConfig) -> Result<Vec<PadicNumber>> {
    let v = read_json(path)?;
    let name = path.display().to_string();
    match &v {
        Value::Array(xs) => xs
            .iter()
            .enumerate()
            .map(|(i, x)| literal(x, cfg, &format!("{name}:{i}")))
            .collect(),
        x => Ok(vec![literal(x, cfg, &name)?]),
    }
}

/// Schottky group with optional evaluation points, quotient graph, lift
/// paths, edge charts and words.
pub struct SchottkyInput {
    pub group: SchottkyGroup,
    pub points: ThetaPoints,
    pub z: [ProjPoint; 2],
    pub quotient: Option<Graph>,
    pub lifts: Option<LiftData>,
    pub charts: Option<Vec<Annulus>>,
    pub words: Option<Vec<Word>>,
}

fn point_or(v: &Value, key: &str, default: PadicNumber, cfg: &PadicConfig, file: &str) -> Result<ProjPoint> {
    match v.get(key) {
        Some(x) => Ok(ProjPoint::affine(literal(x, cfg, &format!("{file}:{key}"))?)),
        None => Ok(ProjPoint::affine(default)),
    }
}

pub fn load_schottky(path: &Path, cfg: &PadicConfig) -> Result<SchottkyInput> {
    let v = read_json(path)?;
    let file = path.display().to_string();
    let at = |k: &str| format!("{file}:{k}");
    let gens = v
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse(at("generators"), "missing array of 2x2 matrices"))?;
    let mut mats = Vec::new();
    for (n, g) in gens.iter().enumerate() {
        let entry = |r: usize, c: usize| -> Result<PadicNumber> {
            let p = format!("generators/{n}/{r}/{c}");
            let x = g.get(r).and_then(|row| row.get(c)).ok_or_else(|| Error::parse(at(&p), "missing entry"))?;
            literal(x, cfg, &at(&p))
        };
        let m = MobiusTransform::new(entry(0, 0)?, entry(0, 1)?, entry(1, 0)?, entry(1, 1)?)
            .map_err(|e| Error::parse(at(&format!("generators/{n}")), e.to_string()))?;
        mats.push(m);
    }
    let group = SchottkyGroup::new(cfg, mats).map_err(|e| located(path, e))?;
    let points = ThetaPoints {
        x: point_or(&v, "x", cfg.int(2), cfg, &file)?,
        z0: point_or(&v, "z0", cfg.int(3), cfg, &file)?,
    };
    let z = match v.get("z").and_then(Value::as_array) {
        Some(zs) if zs.len() == 2 => [
            ProjPoint::affine(literal(&zs[0], cfg, &at("z/0"))?),
            ProjPoint::affine(literal(&zs[1], cfg, &at("z/1"))?),
        ],
        Some(_) => return Err(Error::parse(at("z"), "expected two evaluation points")),
        None => [ProjPoint::affine(cfg.rational(11, 3)), ProjPoint::affine(cfg.rational(13, 2))],
    };
    let quotient = match v.get("quotient") {
        Some(q) => Some(graph_from_value(q, &at("quotient"))?),
        None => None,
    };
    let lifts = match (v.get("lifts"), &quotient) {
        (Some(l), Some(g)) => Some(LiftData::from_json_value(g, l, &at("lifts"))?),
        (Some(_), None) => return Err(Error::parse(at("lifts"), "lift paths need a \"quotient\" graph")),
        _ => None,
    };
    let charts = match (v.get("charts"), &quotient) {
        (Some(c), Some(g)) => {
            let obj = c.as_object().ok_or_else(|| Error::parse(at("charts"), "expected an object keyed by edge id"))?;
            let mut out = Vec::new();
            for e in g.edges() {
                let a = obj
                    .get(&e.id)
                    .ok_or_else(|| Error::parse(at(&format!("charts/{}", e.id)), "missing chart"))?;
                out.push(Annulus::from_json_value(a, cfg, &at(&format!("charts/{}", e.id)))?);
            }
            Some(out)
        }
        (Some(_), None) => return Err(Error::parse(at("charts"), "charts need a \"quotient\" graph")),
        _ => None,
    };
    let words = match v.get("words").and_then(Value::as_array) {
        Some(ws) => Some(
            ws.iter()
                .enumerate()
                .map(|(i, w)| {
                    let s = w.as_str().ok_or_else(|| Error::parse(at(&format!("words/{i}")), "expected a string"))?;
                    parse_word(s).map_err(|e| Error::parse(at(&format!("words/{i}")), e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    Ok(SchottkyInput {
        group,
        points,
        z,
        quotient,
        lifts,
        charts,
        words,
    })
}

/// Boundary annuli for the residue theorem: an array of annulus objects.
pub fn load_annuli(path: &Path, cfg: &PadicConfig) -> Result<Vec<Annulus>> {
    let v = read_json(path)?;
    let file = path.display().to_string();
    let list = v
        .as_array()
        .or_else(|| v.get("annuli").and_then(Value::as_array))
        .ok_or_else(|| Error::parse(&file, "expected an array of annuli"))?;
    list.iter()
        .enumerate()
        .map(|(i, a)| Annulus::from_json_value(a, cfg, &format!("{file}:{i}")))
        .collect()
}
