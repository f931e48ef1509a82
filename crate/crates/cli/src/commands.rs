//! One function per subcommand. Each returns a JSON object; keys come out
//! sorted because `serde_json::Map` is ordered, so equal runs print equal
//! bytes.

use std::path::{Path, PathBuf};

use fricke::census::low_index_subgroups;
use fricke::charvar::{character_variety, factor_library, CharVarError};
use fricke::fp::{parse_presentation, Endomorphism, ParseWarning, Presentation};
use fricke::mic::{
    build_povm, fiducial_candidates, pauli_group, triple_product_geometry, Fiducial,
    PauliStructure, ProjectorSet, TripleGeometry,
};
use fricke::poly::{default_names, SparsePoly};
use fricke::reproduce::{named, run_all};
use fricke::substitution::{invariance_check, pf_analysis, substitution_matrix, PfAnalysis};
use fricke::surface::{
    cell_diagonal, export_mesh, gradient_bound, search_singular, search_singular_at_infinity,
    verify_singular_int, ProjectiveSurface,
};
use fricke::trace::{TraceCoordinates, TraceError};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::{Command, RunConfig};
use crate::error::CliError;

pub struct Output {
    pub json: Value,
    /// Exit status when the command ran but reports failures.
    pub status: i32,
}

pub fn run(cfg: &RunConfig) -> Result<Output, CliError> {
    let json = match cfg.command {
        Command::Charvar => charvar(cfg)?,
        Command::Census => census(cfg)?,
        Command::Subst => subst(cfg)?,
        Command::Mic => mic(cfg)?,
        Command::Surface => surface(cfg)?,
        Command::Reproduce => return Ok(reproduce()),
    };
    Ok(Output { json, status: 0 })
}

/// A bundled name, a file path, or presentation text.
fn load_presentation(input: Option<&str>) -> Result<(Presentation, Vec<String>), CliError> {
    let input = input.ok_or_else(|| CliError::Parse("a presentation is required".into()))?;
    if let Some(p) = named(input) {
        return Ok((p, Vec::new()));
    }
    let text = if !input.is_empty() && Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| CliError::Io(format!("{input}: {e}")))?
    } else {
        input.to_string()
    };
    let (p, warnings) = parse_presentation(text.trim())
        .map_err(|e| CliError::Parse(format!("presentation: {e}")))?;
    let warnings = warnings
        .into_iter()
        .map(|w| match w {
            ParseWarning::EmptyRelatorDropped { index } => {
                format!(
                    "relator {} reduces to the empty word and was dropped",
                    index + 1
                )
            }
        })
        .collect();
    Ok((p, warnings))
}

fn charvar_error(e: CharVarError) -> CliError {
    match e {
        CharVarError::Trace(TraceError::NoProgress(w)) => {
            CliError::Invariant(format!("trace rewriting stalled on {w}"))
        }
        other => CliError::Parse(other.to_string()),
    }
}

fn poly_text(p: &SparsePoly) -> String {
    p.display_with(&default_names(p.nvars()))
}

fn charvar(cfg: &RunConfig) -> Result<Value, CliError> {
    let (p, warnings) = load_presentation(cfg.input.as_deref())?;
    let coords = TraceCoordinates::new(p.rank()).map_err(|e| CliError::Parse(e.to_string()))?;
    let library = factor_library(coords.nvars());
    let cands: Vec<SparsePoly> = library.iter().map(|(_, f)| f.clone()).collect();
    let r = character_variety(&p, &cands).map_err(charvar_error)?;
    if !r.reassembled().eq_up_to_sign(&r.hypersurface) {
        return Err(CliError::Invariant(
            "factor table does not multiply back to the hypersurface".into(),
        ));
    }
    if let Some(g) = r
        .generators
        .iter()
        .find(|g| !r.hypersurface.divides(&g.poly))
    {
        return Err(CliError::Invariant(format!(
            "hypersurface does not divide generator {}",
            poly_text(&g.poly)
        )));
    }
    let generators: Vec<Value> = r
        .generators
        .iter()
        .map(|g| {
            json!({
                "relator": g.relator + 1,
                "test_word": if g.test_word.is_empty() { "1".to_string() } else { g.test_word.to_string() },
                "poly": poly_text(&g.poly),
            })
        })
        .collect();
    let factors: Vec<Value> = library
        .iter()
        .zip(&r.factors)
        .filter(|(_, f)| f.divides || f.generators_divided > 0)
        .map(|((name, _), f)| {
            json!({
                "name": name,
                "poly": poly_text(&f.factor),
                "multiplicity": f.multiplicity,
                "divides_hypersurface": f.divides,
                "generators_divided": f.generators_divided,
            })
        })
        .collect();
    Ok(json!({
        "schema": 1,
        "command": "charvar",
        "presentation": p.to_string(),
        "warnings": warnings,
        "variables": coords.names(),
        "generators": generators,
        "hypersurface": poly_text(&r.hypersurface),
        "factors": factors,
        "residual": poly_text(&r.residual),
    }))
}

fn check_budget(what: &str, size: usize, cfg: &RunConfig) -> Result<(), CliError> {
    if size > cfg.max_cosets {
        return Err(CliError::Budget(format!(
            "{what} needs coset tables with {size} cosets, above max-cosets = {}",
            cfg.max_cosets
        )));
    }
    Ok(())
}

fn census(cfg: &RunConfig) -> Result<Value, CliError> {
    let (p, warnings) = load_presentation(cfg.input.as_deref())?;
    check_budget("census", cfg.n, cfg)?;
    let tables = low_index_subgroups(&p, cfg.n);
    if let Some(t) = tables.iter().find(|t| !t.satisfies(&p)) {
        return Err(CliError::Invariant(format!(
            "census produced a table of index {} that violates a relator",
            t.index()
        )));
    }
    let mut eta = vec![0u64; cfg.n];
    for t in &tables {
        eta[t.index() - 1] += 1;
    }
    Ok(json!({
        "schema": 1,
        "command": "census",
        "presentation": p.to_string(),
        "warnings": warnings,
        "N": cfg.n,
        "eta": eta,
    }))
}

fn parse_map(spec: &str) -> Result<Endomorphism, CliError> {
    match spec {
        "golden" => Ok(Endomorphism::golden()),
        "silver" => Ok(Endomorphism::silver()),
        "tribonacci" => Ok(Endomorphism::tribonacci()),
        _ => match spec.strip_prefix("custom:") {
            Some(body) => {
                Endomorphism::from_spec(body).map_err(|e| CliError::Parse(format!("map: {e}")))
            }
            None => Err(CliError::Parse(format!(
                "map must be golden, silver, tribonacci or custom:<images> (got '{spec}')"
            ))),
        },
    }
}

fn analysis_json(a: &PfAnalysis) -> Value {
    json!({
        "primitive": a.primitive,
        "primitivity_exponent": a.primitivity_exponent,
        "char_poly": a.char_poly.display_with(&["λ"]),
        "pf_eigenvalue": a.pf_decimal,
    })
}

fn subst(cfg: &RunConfig) -> Result<Value, CliError> {
    let e = parse_map(&cfg.map)?;
    let m = substitution_matrix(&e);
    let rows: Vec<Vec<i64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    let analysis = pf_analysis(&m).ok().as_ref().map(analysis_json);
    let mut out = json!({
        "schema": 1,
        "command": "subst",
        "map": cfg.map,
        "images": e.images().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "matrix": rows,
        "analysis": analysis,
    });
    if cfg.input.is_some() {
        let (p, warnings) = load_presentation(cfg.input.as_deref())?;
        check_budget("invariance check", cfg.n, cfg)?;
        let r = invariance_check(&p, &e, cfg.n, cfg.repeats)
            .map_err(|err| CliError::Parse(err.to_string()))?;
        let rows: Vec<Value> = r
            .invariance
            .iter()
            .map(|row| {
                json!({
                    "index": row.index,
                    "original": row.original,
                    "substituted": row.substituted,
                    "equal": row.equal,
                })
            })
            .collect();
        let obj = out.as_object_mut().unwrap();
        obj.insert("presentation".into(), json!(p.to_string()));
        obj.insert("warnings".into(), json!(warnings));
        obj.insert("N".into(), json!(cfg.n));
        obj.insert("repeats".into(), json!(cfg.repeats));
        obj.insert("substituted".into(), json!(r.substituted.to_string()));
        obj.insert("invariance".into(), json!(rows));
        obj.insert("invariant".into(), json!(r.all_equal()));
    }
    Ok(out)
}

fn complex_json(z: Complex64) -> Value {
    // rounding keeps -0.0 and last-bit noise out of the output
    let r = |v: f64| {
        let v = (v * 1e12).round() / 1e12;
        if v == 0.0 {
            0.0
        } else {
            v
        }
    };
    json!([r(z.re), r(z.im)])
}

fn povm_json(f: &Fiducial, ps: &ProjectorSet) -> Value {
    json!({
        "source": f.source,
        "fiducial": f.vector.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
        "magic": f.magic,
        "gram_rank": ps.gram_rank,
        "mic": ps.is_mic(),
        "twirl_error": format!("{:.1e}", ps.twirl_error),
    })
}

fn geometry_json(g: &TripleGeometry) -> Value {
    let clusters: Vec<Value> = g
        .clusters
        .iter()
        .map(|c| json!({"value": complex_json(c.value), "count": c.count()}))
        .collect();
    let lines = g.lines.as_ref().map(|l| {
        json!({
            "value": complex_json(l.value),
            "count": l.lines.len(),
            "lines": l.lines,
            "lines_per_point": l.lines_per_point,
            "verdict": l.verdict,
        })
    });
    json!({"triples": g.total, "clusters": clusters, "lines": lines})
}

fn checked_povm(f: &Fiducial, cfg: &RunConfig) -> Result<ProjectorSet, CliError> {
    let paulis = pauli_group(f.dim(), PauliStructure::default_for(f.dim()))
        .map_err(|e| CliError::Parse(e.to_string()))?;
    let ps = build_povm(f, &paulis).map_err(|e| CliError::Parse(e.to_string()))?;
    if ps.twirl_error > cfg.tol.max(1e-10) || ps.projector_error > cfg.tol.max(1e-10) {
        return Err(CliError::Invariant(format!(
            "projectors from {} fail the twirl identity (error {:.1e})",
            f.source, ps.twirl_error
        )));
    }
    Ok(ps)
}

fn mic(cfg: &RunConfig) -> Result<Value, CliError> {
    let d = cfg.dim;
    if d < 2 {
        return Err(CliError::Parse("dim must be at least 2".into()));
    }
    let mut fiducials: Vec<(Option<usize>, Fiducial)> = Vec::new();
    let mut presentation = Value::Null;
    let mut tables = 0;
    match cfg.input.as_deref() {
        Some(_) => {
            let (p, _) = load_presentation(cfg.input.as_deref())?;
            check_budget("mic", d, cfg)?;
            presentation = json!(p.to_string());
            let found: Vec<_> = low_index_subgroups(&p, d)
                .into_iter()
                .filter(|t| t.index() == d)
                .collect();
            tables = found.len();
            for (i, t) in found.iter().enumerate() {
                if !t.satisfies(&p) {
                    return Err(CliError::Invariant(format!(
                        "coset table {} violates a relator",
                        i + 1
                    )));
                }
                for f in fiducial_candidates(&t.perm_rep())
                    .into_iter()
                    .filter(|f| f.magic)
                {
                    fiducials.push((Some(i + 1), f));
                }
            }
        }
        None => match d {
            3 => fiducials.push((None, Fiducial::qutrit())),
            4 => fiducials.push((None, Fiducial::two_qubit())),
            _ => {
                return Err(CliError::Parse(format!(
                    "no built-in fiducial in dimension {d}; give a presentation"
                )))
            }
        },
    }
    let mut results = Vec::new();
    // detailed geometry for the first fiducial whose lines match a known
    // configuration, else for the first MIC one
    let mut detailed: Option<(i32, Value)> = None;
    for (table, f) in &fiducials {
        let ps = checked_povm(f, cfg)?;
        let mut v = povm_json(f, &ps);
        let obj = v.as_object_mut().unwrap();
        obj.insert("table".into(), json!(table));
        if ps.is_mic() {
            let g = triple_product_geometry(&ps, cfg.tol);
            let rank = match g.lines.as_ref().and_then(|l| l.verdict.as_ref()) {
                Some(_) => 2,
                None => 1,
            };
            obj.insert(
                "lines".into(),
                json!(g.lines.as_ref().map(|l| json!({
                    "value": complex_json(l.value),
                    "count": l.lines.len(),
                    "verdict": l.verdict,
                }))),
            );
            if detailed.as_ref().is_none_or(|(r, _)| rank > *r) {
                let mut gj = geometry_json(&g);
                gj.as_object_mut()
                    .unwrap()
                    .insert("source".into(), json!(f.source));
                gj.as_object_mut()
                    .unwrap()
                    .insert("table".into(), json!(table));
                detailed = Some((rank, gj));
            }
        }
        results.push(v);
    }
    let geometry = detailed.map_or(Value::Null, |(_, g)| g);
    Ok(json!({
        "schema": 1,
        "command": "mic",
        "dim": d,
        "presentation": presentation,
        "tables": tables,
        "fiducials": results,
        "geometry": geometry,
    }))
}

fn load_surface_poly(input: Option<&str>) -> Result<(SparsePoly, ProjectiveSurface), CliError> {
    let text = input.unwrap_or("f_H");
    if let Some((_, f)) = factor_library(3).into_iter().find(|(n, _)| *n == text) {
        let s = ProjectiveSurface::from_affine(&f).map_err(|e| CliError::Parse(e.to_string()))?;
        return Ok((f, s));
    }
    if let Ok(f) = SparsePoly::parse(text, 3) {
        let s = ProjectiveSurface::from_affine(&f).map_err(|e| CliError::Parse(e.to_string()))?;
        return Ok((f, s));
    }
    let h = SparsePoly::parse_with(text, &["x", "y", "z", "t"])
        .map_err(|e| CliError::Parse(format!("polynomial: {e}")))?;
    let s = ProjectiveSurface::new(h).map_err(|e| CliError::Parse(e.to_string()))?;
    Ok((s.poly().dehomogenize(), s))
}

fn mesh_path(cfg: &RunConfig) -> PathBuf {
    match &cfg.out {
        Some(p) => p.with_extension("obj"),
        None => PathBuf::from("surface.obj"),
    }
}

fn surface(cfg: &RunConfig) -> Result<Value, CliError> {
    let (f, s) = load_surface_poly(cfg.input.as_deref())?;
    let b = (cfg.box_.floor() as i64).max(1);
    let pts = search_singular(&s, b).map_err(|e| CliError::Parse(e.to_string()))?;
    let inf = search_singular_at_infinity(&s, b).map_err(|e| CliError::Parse(e.to_string()))?;
    for p in pts.iter().chain(&inf) {
        if verify_singular_int(&s, *p) != Ok(true) {
            return Err(CliError::Invariant(format!(
                "grid point {p:?} fails the exact check"
            )));
        }
    }
    let mesh = export_mesh(&f, cfg.box_, cfg.res).map_err(|e| CliError::Parse(e.to_string()))?;
    let bound = gradient_bound(&f, cfg.box_) * cell_diagonal(cfg.box_, cfg.res);
    let residual = mesh.max_residual(&f);
    if residual > bound {
        return Err(CliError::Invariant(format!(
            "mesh vertex residual {residual:.3e} exceeds the Lipschitz bound {bound:.3e}"
        )));
    }
    let path = mesh_path(cfg);
    std::fs::write(&path, mesh.to_obj())
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(json!({
        "schema": 1,
        "command": "surface",
        "surface": s.poly().display_with(&["x", "y", "z", "t"]),
        "degree": s.degree(),
        "search_bound": b,
        "singular_points": pts,
        "singular_at_infinity": inf,
        "mesh": {
            "path": path.display().to_string(),
            "box": cfg.box_,
            "resolution": cfg.res,
            "vertices": mesh.vertices.len(),
            "faces": mesh.faces.len(),
            "warning": mesh.warning,
            "residual_bound": format!("{bound:.3e}"),
        },
    }))
}

fn reproduce() -> Output {
    let rows = run_all();
    for r in &rows {
        eprintln!("{}", r.line());
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    let table: Vec<Value> = rows
        .iter()
        .map(|r| json!({"id": r.id, "name": r.name, "pass": r.pass, "detail": r.detail}))
        .collect();
    Output {
        json: json!({
            "schema": 1,
            "command": "reproduce",
            "criteria": table,
            "passed": passed,
            "total": rows.len(),
        }),
        status: if passed == rows.len() { 0 } else { 1 },
    }
}
