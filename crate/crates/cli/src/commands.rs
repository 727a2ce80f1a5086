//! One function per subcommand. Each returns canonical text lines and the
//! same data as JSON.

use std::path::Path;

use serde_json::{json, Value};
use toric_core::error::{Error, Result};
use toric_core::graph::{self, Graph};
use toric_core::linalg::IntMatrix;
use toric_core::mumford::{format_word, hurewicz, period_matrix, residue_cochain};
use toric_core::padic::PadicNumber;
use toric_core::regulators::{
    harmonic_representative, k1_normalization_invariance_check, k1_orientation_change_check, k1_surface_regulator,
    K1SurfaceInput, K2Problem,
};
use toric_core::report::{CheckLine, Status};
use toric_core::symbols::{
    annulus_degree, annulus_symbol, parse_point, parse_rational, residue_theorem_check, tame_symbol, Annulus,
    SplitRationalFunction,
};
use toric_core::weight::{
    self, build_complex, consani_deligne, jacobian_valuation, t_group_of, verify_n_isogeny,
    verify_pairing_relation,
};

use crate::app::{GlobalOpts, Output};
use crate::inputs;
use crate::verify;

fn rows(m: &IntMatrix) -> Vec<Vec<i128>> {
    m.to_rows()
}

fn fmt_vec(v: &[i128]) -> String {
    format!("{v:?}")
}

fn fmt_rows(m: &IntMatrix) -> String {
    format!("{:?}", m.to_rows())
}

fn check_json(l: &CheckLine) -> Value {
    json!({ "status": l.status.to_string(), "name": l.name, "detail": l.detail })
}

pub fn graph_h1(path: &Path) -> Result<Output> {
    let g = inputs::load_graph(path)?;
    let h = graph::h1_presentation(&g)?;
    Ok(Output {
        lines: vec![format!("rank {}, torsion {}", h.free_rank, fmt_vec(&h.torsion))],
        json: json!({ "rank": h.free_rank, "torsion": h.torsion }),
        failed: false,
    })
}

fn edge_ids(g: &Graph) -> Vec<String> {
    g.edges().iter().map(|e| e.id.clone()).collect()
}

pub fn graph_harmonic(path: &Path, cochain: Option<&Path>) -> Result<Output> {
    let g = inputs::load_graph(path)?;
    let basis = graph::harmonic_basis(&g);
    let ids = edge_ids(&g);
    let mut lines = vec![format!("edges {}", ids.join(" ")), format!("rank {}", basis.len())];
    for b in &basis {
        lines.push(format!("basis {}", fmt_vec(b)));
    }
    let mut out = json!({ "edges": ids, "basis": basis });
    if let Some(cp) = cochain {
        let v = inputs::read_json(cp)?;
        let c = graph::cochain_from_json(
            &g,
            &v,
            0i128,
            |x| {
                x.as_i64()
                    .map(i128::from)
                    .ok_or_else(|| Error::parse("<cochain>", format!("expected an integer, got {x}")))
            },
            &cp.display().to_string(),
        )?;
        let (h, m) = harmonic_representative(&g, &c)?;
        let harmonic = graph::is_harmonic(&g, &graph::IntegerGroup, &c);
        lines.push(format!("cochain {} harmonic {harmonic}", fmt_vec(&c)));
        lines.push(format!("projection {} multiplier {m}", fmt_vec(&h)));
        out["cochain"] = json!(c);
        out["harmonic"] = json!(harmonic);
        out["projection"] = json!(h);
        out["multiplier"] = json!(m);
    }
    Ok(Output {
        lines,
        json: out,
        failed: false,
    })
}

pub fn tgroups(path: &Path) -> Result<Output> {
    let data = inputs::load_chow(path)?;
    let mut lines = Vec::new();
    let mut groups = Vec::new();
    for j in -1..=(data.dimension as i64 + 1) {
        let cx = build_complex(&data, j)?;
        for i in cx.nonzero_degrees() {
            let t = t_group_of(&cx, i)?;
            if t.free_rank == 0 && t.torsion.is_empty() {
                continue;
            }
            lines.push(format!("T_{j}^{i} rank {}, torsion {}", t.free_rank, fmt_vec(&t.torsion)));
            groups.push(json!({ "i": i, "j": j, "rank": t.free_rank, "torsion": t.torsion }));
        }
    }
    if lines.is_empty() {
        lines.push("all groups vanish".into());
    }
    Ok(Output {
        lines,
        json: json!({ "groups": groups }),
        failed: false,
    })
}

pub fn monodromy(path: &Path, i: i64, j: i64) -> Result<Output> {
    let data = inputs::load_chow(path)?;
    let n = weight::monodromy_matrix(&data, i, j)?;
    let pairing = weight::t_pairing(&data, i, j)?;
    let mut checks = Vec::new();
    // N^k: T_{j'+k}^{-k} -> T_{j'}^k starts in negative degree
    if i < 0 {
        let (k, jt) = (-i, j + i);
        let iso = verify_n_isogeny(&data, k, jt)?;
        checks.push(CheckLine::from_bool(
            format!("isogeny[k={k},j={jt}]"),
            iso.passed(),
            format!(
                "ranks {} -> {}, image rank {}",
                iso.source_rank, iso.target_rank, iso.map_rank
            ),
        ));
    }
    checks.push(match verify_pairing_relation(&data, i, j) {
        Ok(()) => CheckLine::pass(format!("pairing-relation[i={i},j={j}]"), ""),
        Err(e) => CheckLine::fail(format!("pairing-relation[i={i},j={j}]"), e.to_string()),
    });
    let mut lines = vec![format!("N {}", fmt_rows(&n)), format!("pairing {}", fmt_rows(&pairing))];
    lines.extend(checks.iter().map(|c| c.to_string()));
    Ok(Output {
        lines,
        json: json!({
            "monodromy": rows(&n),
            "pairing": rows(&pairing),
            "checks": checks.iter().map(check_json).collect::<Vec<_>>(),
        }),
        failed: checks.iter().any(|c| !c.passed()),
    })
}

pub fn consani(path: &Path, k: Option<i64>, r: Option<i64>) -> Result<Output> {
    let data = inputs::load_chow(path)?;
    let ks: Vec<i64> = k.map(|k| vec![k]).unwrap_or_else(|| vec![0, 1]);
    let rs: Vec<i64> = r.map(|r| vec![r]).unwrap_or_else(|| vec![0, 1, 2]);
    let mut lines = Vec::new();
    let mut results = Vec::new();
    let mut failed = false;
    for &k in &ks {
        for &r in &rs {
            let c = consani_deligne(&data, k, r)?;
            let line = CheckLine::from_bool(
                format!("les[k={k},r={r}]"),
                c.les_holds(),
                format!("dim {} = coker {} + ker {}", c.dimension, c.coker_dim, c.ker_dim),
            );
            failed |= !line.passed();
            lines.push(format!("H_D^{}(r={r}) dimension {} (cone degree {})", k + 1, c.dimension, c.degree));
            lines.push(line.to_string());
            results.push(json!({
                "k": k, "r": r, "degree": c.degree, "dimension": c.dimension,
                "coker": c.coker_dim, "ker": c.ker_dim, "les": c.les_holds(),
            }));
        }
    }
    Ok(Output {
        lines,
        json: json!({ "results": results }),
        failed,
    })
}

fn lits(xs: &[PadicNumber]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

pub fn jacobian_reduce(o: &GlobalOpts, jac_path: &Path, x_path: &Path) -> Result<Output> {
    let cfg = o.config()?;
    let jac = inputs::load_jacobian(jac_path, &cfg)?;
    let x = inputs::load_element(x_path, &cfg)?;
    let red = weight::jacobian_reduce(&jac, &x)?;
    let val = jacobian_valuation(&jac, &x)?;
    let vals: Vec<Option<i64>> = red.normal_form.iter().map(|y| y.valuation()).collect();
    let mut lines: Vec<String> = red.normal_form.iter().map(|y| format!("normal form {y}")).collect();
    lines.push(format!(
        "valuation {}",
        vals.iter().map(|v| v.map_or("inf".into(), |v| v.to_string())).collect::<Vec<_>>().join(" ")
    ));
    lines.push(format!("witness {}", fmt_vec(&red.witness)));
    lines.push(format!("free part {}", fmt_vec(&val)));
    Ok(Output {
        lines,
        json: json!({
            "normal_form": lits(&red.normal_form),
            "valuation": vals,
            "witness": red.witness,
            "free_part": val,
        }),
        failed: false,
    })
}

fn function(o: &GlobalOpts, text: &str, what: &str) -> Result<SplitRationalFunction> {
    let cfg = o.config()?;
    SplitRationalFunction::parse_expr(text, &cfg).map_err(|e| Error::parse(format!("--{what}"), e.to_string()))
}

/// Canonical literal, followed by the small integer it equals when there is one.
fn value_line(label: &str, x: &PadicNumber) -> String {
    match x.to_rational_hint() {
        Some(n) if n.bits() <= 16 => format!("{label} {x}  (= {n})"),
        _ => format!("{label} {x}"),
    }
}

pub fn symbol_tame(o: &GlobalOpts, f: &str, g: &str, at: &str) -> Result<Output> {
    let cfg = o.config()?;
    let (f, g) = (function(o, f, "f")?, function(o, g, "g")?);
    let x = parse_point(&Value::String(at.into()), &cfg, "--at")?;
    let t = tame_symbol(&f, &g, &x)?;
    Ok(Output {
        lines: vec![value_line(&format!("t_{at}"), &t)],
        json: json!({ "point": x.to_string(), "value": t.to_string() }),
        failed: false,
    })
}

fn parse_bounds(text: &str) -> Result<(num_rational::Rational64, num_rational::Rational64)> {
    let err = || Error::parse("--annulus", format!("expected a,b with rationals a < b, got {text:?}"));
    let (a, b) = text.split_once(',').ok_or_else(err)?;
    let a = parse_rational(&Value::String(a.trim().into())).map_err(|_| err())?;
    let b = parse_rational(&Value::String(b.trim().into())).map_err(|_| err())?;
    Ok((a, b))
}

pub fn symbol_annulus(o: &GlobalOpts, f: &str, g: &str, bounds: &str, center: &str, reversed: bool) -> Result<Output> {
    let cfg = o.config()?;
    let (f, g) = (function(o, f, "f")?, function(o, g, "g")?);
    let (a, b) = parse_bounds(bounds)?;
    let c = cfg.parse(center).map_err(|e| Error::parse("--center", e.to_string()))?;
    let mut e = Annulus::new(c, a, b)?;
    if reversed {
        e = e.reversed();
    }
    let t = annulus_symbol(&f, &g, &e)?;
    let (df, dg) = (annulus_degree(&f, &e)?, annulus_degree(&g, &e)?);
    Ok(Output {
        lines: vec![value_line("t_e", &t), format!("deg_e(f) {df}, deg_e(g) {dg}")],
        json: json!({ "annulus": e.to_json_value(), "value": t.to_string(), "deg_f": df, "deg_g": dg }),
        failed: false,
    })
}

pub fn residue_check(o: &GlobalOpts, f: &str, g: &str, boundary: &Path) -> Result<Output> {
    let cfg = o.config()?;
    let (f, g) = (function(o, f, "f")?, function(o, g, "g")?);
    let annuli = inputs::load_annuli(boundary, &cfg)?;
    let prod = residue_theorem_check(&f, &g, &annuli)?;
    let line = CheckLine::from_bool(
        "residue-theorem",
        prod.is_one_to(cfg.check_digits()),
        format!("product {prod} over {} boundary annuli", annuli.len()),
    );
    Ok(Output {
        lines: vec![line.to_string()],
        json: json!({ "product": prod.to_string(), "check": check_json(&line) }),
        failed: !line.passed(),
    })
}

pub fn mumford_periods(o: &GlobalOpts, path: &Path) -> Result<Output> {
    let cfg = o.config()?;
    let s = inputs::load_schottky(path, &cfg)?;
    let q = period_matrix(&s.group, &s.points, &s.z)?;
    let val = q.val_matrix()?;
    let r = q.entries.len();
    let mut lines = Vec::new();
    for i in 0..r {
        for j in 0..r {
            lines.push(format!("Q[{}][{}] {} (L = {})", i + 1, j + 1, q.entries[i][j], q.lengths[i][j]));
        }
    }
    lines.push(format!("val(Q) {}", fmt_rows(&val)));
    let sym = CheckLine::from_bool(
        "period-symmetry",
        q.asymmetry(cfg.check_digits()).is_none(),
        format!("to {} digits", cfg.check_digits()),
    );
    let mut checks = vec![sym];
    if let (Some(g), Some(lifts)) = (&s.quotient, &s.lifts) {
        let cycles: Vec<Vec<i128>> = (0..r).map(|i| hurewicz(g, lifts, &[(i, 1)])).collect::<Result<_>>()?;
        let gram = graph::cycle_pairing_matrix(&cycles);
        checks.push(CheckLine::from_bool(
            "val-equals-cycle-pairing",
            gram == val,
            format!("cycle pairing {}", fmt_rows(&gram)),
        ));
    }
    lines.extend(checks.iter().map(|c| c.to_string()));
    Ok(Output {
        lines,
        json: json!({
            "entries": q.entries.iter().map(|row| lits(row)).collect::<Vec<_>>(),
            "lengths": q.lengths,
            "val": rows(&val),
            "checks": checks.iter().map(check_json).collect::<Vec<_>>(),
        }),
        failed: checks.iter().any(|c| !c.passed()),
    })
}

pub fn mumford_residues(o: &GlobalOpts, path: &Path) -> Result<Output> {
    let cfg = o.config()?;
    let s = inputs::load_schottky(path, &cfg)?;
    let file = path.display().to_string();
    let need = |what: &str| Error::parse(&file, format!("mumford-residues needs \"{what}\""));
    let g = s.quotient.as_ref().ok_or_else(|| need("quotient"))?;
    let lifts = s.lifts.as_ref().ok_or_else(|| need("lifts"))?;
    let charts = s.charts.as_ref().ok_or_else(|| need("charts"))?;
    let len = o.l.unwrap_or(4);
    let words = match &s.words {
        Some(w) => w.clone(),
        None => s
            .group
            .words(3)?
            .into_iter()
            .map(|(w, _)| w)
            .filter(|w| !w.is_empty())
            .collect(),
    };
    let mut checks = Vec::new();
    for w in &words {
        let res = residue_cochain(&s.group, w, &s.points.x, charts, len)?;
        let hur = hurewicz(g, lifts, w)?;
        checks.push(CheckLine::from_bool(
            format!("residues[{}]", format_word(w)),
            res == hur,
            format!("residues {} hurewicz {}", fmt_vec(&res), fmt_vec(&hur)),
        ));
    }
    Ok(Output {
        lines: checks.iter().map(|c| c.to_string()).collect(),
        json: json!({ "length": len, "checks": checks.iter().map(check_json).collect::<Vec<_>>() }),
        failed: checks.iter().any(|c| !c.passed()),
    })
}

pub fn reg_k2(o: &GlobalOpts, path: &Path) -> Result<Output> {
    let cfg = o.config()?;
    let v = inputs::read_json(path)?;
    let problem = K2Problem::from_json_value(&v, &cfg, &path.display().to_string())?;
    let reg = problem.solve(&cfg)?;
    let g = &problem.curve().graph;
    let mut lines: Vec<String> = g
        .edges()
        .iter()
        .zip(&reg.cochain)
        .map(|(e, x)| value_line(&format!("edge {}", e.id), x))
        .collect();
    if let Some(c) = &reg.tate_class {
        lines.push(format!("class {} (witness {})", c.normal_form[0], fmt_vec(&c.witness)));
    }
    if let Some(l) = reg.truncation {
        lines.push(format!("truncation L = {l}"));
    }
    Ok(Output {
        lines,
        json: reg.to_json_value(g),
        failed: false,
    })
}

pub fn reg_k1(o: &GlobalOpts, path: &Path, scale: &str) -> Result<Output> {
    let cfg = o.config()?;
    let v = inputs::read_json(path)?;
    let mut input = K1SurfaceInput::from_json_value(&v, &cfg, &path.display().to_string())?;
    let c = cfg.parse(scale).map_err(|e| Error::parse("--scale", e.to_string()))?;
    let mut lines = Vec::new();
    let mut projections = Vec::new();
    for (n, b) in input.betas.iter_mut().enumerate() {
        let (h, m) = harmonic_representative(&input.gamma1, b)?;
        lines.push(format!("beta[{n}] {} -> harmonic {} multiplier {m}", fmt_vec(b), fmt_vec(&h)));
        projections.push(json!({ "given": b.clone(), "harmonic": h, "multiplier": m }));
        *b = h;
    }
    let reg = k1_surface_regulator(&input, &cfg)?;
    for (n, x) in reg.values.iter().enumerate() {
        lines.push(value_line(&format!("reg[{n}]"), x));
    }
    let mut checks = Vec::new();
    for w in 0..input.gamma2.num_vertices() {
        checks.push(k1_normalization_invariance_check(&input, &cfg, w, &c)?);
    }
    for e in 0..input.gamma2.num_edges() {
        if reg.context[e].is_some() {
            checks.push(k1_orientation_change_check(&input, &cfg, e, o.bound)?);
        }
    }
    lines.extend(checks.iter().map(|l| l.to_string()));
    let mut out = reg.to_json_value(&input.gamma2);
    out["betas"] = json!(projections);
    out["checks"] = json!(checks.iter().map(check_json).collect::<Vec<_>>());
    Ok(Output {
        lines,
        json: out,
        failed: checks.iter().any(|l| l.status != Status::Pass),
    })
}

pub fn verify_all() -> Output {
    let lines = verify::verify_all();
    let failed = lines.iter().any(|l| !l.passed());
    let text = verify::render(&lines);
    Output {
        lines: text.lines().map(str::to_string).collect(),
        json: json!(lines.iter().map(check_json).collect::<Vec<_>>()),
        failed,
    }
}
