use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use metric_embed::bzelement::{
    canonical_element_with, contraction_map, isometry_defect, standard_vertex_map, AcuteTriangle,
    ElementOptions, FoldParams, Polar,
};
use metric_embed::qcbounds::{
    convex_face_count_bound, dihedral_wedge_coefficients, folding_dilatation,
    mesh_edge_dilatation_bound, normalized_link_volume, parse_off, uniform_index_bound,
    DihedralWedgeSpec, EdgeAngleReport, LinkMethod, PolyMesh,
};
use metric_embed::quadruple::{realize_quadruple, s3_embeddability, wald_curvature};
use metric_embed::skeleton::{
    global_compatibility, local_compatibility, parse_metric_graph, polyline_curvature,
    CurvatureMode, CurveTriple, KappaAssignment, MetricGraph,
};
use metric_embed::{Curvature, MetricQuadruple, WaldOptions};
use serde_json::{json, Value};

use crate::args::*;
use crate::error::{input, CliError};

/// What a command produced: the JSON report, an optional verdict that
/// drives the exit status, and an optional plain-text rendering.
pub struct Outcome {
    pub report: Value,
    pub verdict: Option<bool>,
    pub text: Option<String>,
}

impl Outcome {
    fn report(report: Value) -> Self {
        Outcome {
            report,
            verdict: None,
            text: None,
        }
    }

    fn verdict(report: Value, verdict: bool) -> Self {
        Outcome {
            report,
            verdict: Some(verdict),
            text: None,
        }
    }
}

type Run = Result<Outcome, CliError>;

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn quadruple(text: &str) -> Result<MetricQuadruple, CliError> {
    text.parse().map_err(input("--quadruple"))
}

fn curvature(k: f64) -> Result<Curvature, CliError> {
    Curvature::new(k).map_err(input("--kappa"))
}

fn graph(path: &Path) -> Result<MetricGraph, CliError> {
    parse_metric_graph(&read(path)?).map_err(input(path.display().to_string()))
}

fn mesh(path: &Path) -> Result<PolyMesh, CliError> {
    parse_off(&read(path)?).map_err(input(path.display().to_string()))
}

pub fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Wald(_) => "wald",
        Command::EmbedCheck(_) => "embed-check",
        Command::CheckLocal(_) => "check-local",
        Command::CheckGlobal(_) => "check-global",
        Command::QcBound(_) => "qc-bound",
        Command::Wedge(_) => "wedge",
        Command::IndexBound(_) => "index-bound",
        Command::LinkVolume(_) => "link-volume",
        Command::Fold(_) => "fold",
        Command::BzElement(_) => "bz-element",
        Command::CurveCurvature(_) => "curve-curvature",
    }
}

pub fn run(cmd: &Command) -> Run {
    match cmd {
        Command::Wald(a) => wald(a),
        Command::EmbedCheck(a) => embed_check(a),
        Command::CheckLocal(a) => check_local(a),
        Command::CheckGlobal(a) => check_global(a),
        Command::QcBound(a) => qc_bound(a),
        Command::Wedge(a) => wedge(a),
        Command::IndexBound(a) => index_bound(a),
        Command::LinkVolume(a) => link_volume(a),
        Command::Fold(a) => fold(a),
        Command::BzElement(a) => bz_element(a),
        Command::CurveCurvature(a) => curve(a),
    }
}

fn wald(a: &WaldArgs) -> Run {
    let q = quadruple(&a.quadruple)?;
    let opts = WaldOptions {
        samples: a.samples,
        kappa_cap: a.kappa_cap,
        residual_tol: a.residual_tol,
        flat_tol: a.flat_tol,
        realization_tol: a.realization_tol,
        ..WaldOptions::default()
    };
    let w = wald_curvature(&q, &opts).map_err(input("--quadruple"))?;
    Ok(Outcome::report(json!({
        "quadruple": q.distances(),
        "classification": w.classification,
        "kappa": w.unique(),
        "roots": w.roots,
        "rejected": w.rejected,
        "search_interval": w.search_interval,
        "cayley_menger": w.cayley_menger,
    })))
}

fn embed_check(a: &EmbedArgs) -> Run {
    let q = quadruple(&a.quadruple)?;
    let k = curvature(a.kappa)?;
    let cert = s3_embeddability(&q, k).map_err(input("--quadruple"))?;
    let realization = cert.verdict.then(|| realize_quadruple(&q, k, 3));
    let planar = cert.planar.then(|| realize_quadruple(&q, k, 2));
    Ok(Outcome::verdict(
        json!({
            "quadruple": q.distances(),
            "kappa": a.kappa,
            "certificate": cert,
            "realization": realization,
            "planar_realization": planar,
        }),
        cert.verdict,
    ))
}

fn check_local(a: &LocalArgs) -> Run {
    let origin = a.graph.display().to_string();
    let g = graph(&a.graph)?;
    let v = g.vertex(&a.vertex).map_err(input(&origin))?;
    let k = match a.kappa.or(g.declared_kappa(v)) {
        Some(k) => curvature(k)?,
        None => {
            return Err(CliError::Usage(format!(
                "no curvature for vertex {:?}; pass --kappa",
                a.vertex
            )))
        }
    };
    let r = local_compatibility(&g, v, k).map_err(input(&origin))?;
    let verdict = r.verdict;
    Ok(Outcome::verdict(to_value(&r), verdict))
}

fn check_global(a: &GlobalArgs) -> Run {
    let origin = a.graph.display().to_string();
    let g = graph(&a.graph)?;
    let assignment = if let Some(k) = a.kappa {
        KappaAssignment::Constant(k)
    } else if let Some(path) = &a.kappa_file {
        let map: HashMap<String, f64> =
            serde_json::from_str(&read(path)?).map_err(|e| CliError::Input {
                origin: path.display().to_string(),
                source: metric_embed::Error::Parse {
                    line: e.line(),
                    message: e.to_string(),
                },
            })?;
        KappaAssignment::PerVertex(map)
    } else if g.has_declared_kappa() {
        KappaAssignment::declared(&g)
    } else {
        return Err(CliError::Usage(
            "no curvature given; pass --kappa, --kappa-file, or declare kappa in a JSON graph".into(),
        ));
    };
    let r = global_compatibility(&g, &assignment).map_err(input(&origin))?;
    let verdict = r.verdict;
    Ok(Outcome::verdict(to_value(&r), verdict))
}

fn edge_table(r: &EdgeAngleReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:>6} {:>6} {:>22} {:>22}", "u", "v", "angle", "pi/angle");
    for ((e, angle), c) in r.edges.iter().zip(&r.angles).zip(&r.contributions) {
        let c = c.map_or("reflex".to_string(), |c| format!("{c:.16e}"));
        let _ = writeln!(s, "{:>6} {:>6} {:>22.16e} {:>22}", e[0], e[1], angle, c);
    }
    for b in &r.boundary {
        let _ = writeln!(s, "{:>6} {:>6} {:>22} {:>22}", b[0], b[1], "boundary", "-");
    }
    let _ = writeln!(s, "bound {:.16e}", r.bound);
    for w in &r.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}

fn qc_bound(a: &QcBoundArgs) -> Run {
    let m = mesh(&a.mesh)?;
    let r = mesh_edge_dilatation_bound(&m).map_err(input(a.mesh.display().to_string()))?;
    let mut report = to_value(&r);
    report["closed"] = json!(m.is_closed());
    Ok(Outcome {
        text: (a.format == Format::Table).then(|| edge_table(&r)),
        report,
        verdict: None,
    })
}

fn wedge(a: &WedgeArgs) -> Run {
    if !a.angle.is_empty() {
        let k = match a.wedge_type {
            Some(k) => k,
            None => (a.dim + 1)
                .checked_sub(2 + a.angle.len())
                .ok_or_else(|| CliError::Usage(format!("{} angles do not fit dimension {}", a.angle.len(), a.dim)))?,
        };
        let spec = DihedralWedgeSpec {
            n: a.dim,
            k,
            angles: a.angle.clone(),
        };
        let b = dihedral_wedge_coefficients(&spec).map_err(input("--angle"))?;
        return Ok(Outcome::report(json!({
            "kind": "dihedral-wedge",
            "n": a.dim,
            "k": k,
            "angles": a.angle.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "bounds": b,
            "exact_k_i": b.exact_k_i.map(|r| r.to_string()),
        })));
    }
    if let Some(m) = a.faces {
        let b = convex_face_count_bound(m, a.dim as u64).map_err(input("--faces"))?;
        return Ok(Outcome::report(json!({
            "kind": "convex-polyhedron",
            "n": a.dim,
            "faces": m,
            "bounds": b,
            "exact_k_i": b.exact_k_i.map(|r| r.to_string()),
        })));
    }
    let [alpha, beta] = a.fold[..] else {
        return Err(CliError::Usage("--fold takes alpha,beta".into()));
    };
    let k = folding_dilatation(alpha, beta).map_err(input("--fold"))?;
    Ok(Outcome::report(json!({
        "kind": "folding",
        "alpha": alpha.to_string(),
        "beta": beta.to_string(),
        "k_i": k,
    })))
}

fn index_bound(a: &IndexArgs) -> Run {
    let bound = uniform_index_bound(a.dim, a.k_i).map_err(input("--dim"))?;
    Ok(Outcome::report(json!({ "n": a.dim, "k_i": a.k_i, "bound": bound })))
}

fn link_volume(a: &LinkArgs) -> Run {
    let origin = a.mesh.display().to_string();
    let m = mesh(&a.mesh)?;
    let method = match a.method {
        Method::Exact => LinkMethod::Exact,
        Method::MonteCarlo => LinkMethod::MonteCarlo {
            samples: a.samples,
            seed: a.seed,
        },
    };
    let volumes: Vec<Value> = match a.vertex {
        Some(v) => vec![to_value(
            &normalized_link_volume(&m, v, method).map_err(input(&origin))?,
        )],
        None => (0..m.vertices.len())
            .map(|v| match normalized_link_volume(&m, v, method) {
                Ok(r) => to_value(&r),
                Err(e) => json!({ "vertex": v, "error": e.to_string() }),
            })
            .collect(),
    };
    Ok(Outcome::report(json!({
        "method": method,
        "volumes": volumes,
    })))
}

fn fold(a: &FoldArgs) -> Run {
    let mut points = Vec::with_capacity(a.point.len());
    for &[rho, phi] in &a.point {
        let p = Polar { rho, phi };
        let image = if a.contraction {
            contraction_map(a.theta, p)
        } else {
            let params = FoldParams::new(a.theta, a.lambda.expect("required by clap"), a.a)
                .map_err(input("--theta"))?;
            standard_vertex_map(&params, p)
        }
        .map_err(input("--point"))?;
        points.push(json!({ "input": p, "image": image }));
    }
    Ok(Outcome::report(json!({
        "map": if a.contraction { "contraction" } else { "standard" },
        "theta": a.theta,
        "lambda": a.lambda,
        "a": a.a,
        "points": points,
    })))
}

fn bz_element(a: &BzArgs) -> Run {
    let big = AcuteTriangle::from_sides(a.big).map_err(input("--big"))?;
    let small = AcuteTriangle::from_sides(a.small).map_err(input("--small"))?;
    let opts = ElementOptions {
        angle_tolerance: a.angle_tol,
        c_min: a.c_min,
        min_angle: a.min_angle,
    };
    let e = canonical_element_with(&big, &small, &opts).map_err(input("--small"))?;
    let defect = isometry_defect(&e, &big).map_err(input("--big"))?;
    if let Some(path) = &a.obj {
        fs::write(path, e.to_obj()).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(Outcome::report(json!({
        "element": e,
        "defect": defect,
        "obj": a.obj.as_ref().map(|p| p.display().to_string()),
    })))
}

fn curve(a: &CurveArgs) -> Run {
    let t = if let Some([x, y, z]) = a.lengths {
        CurveTriple::new(x, y, z).map_err(input("--lengths"))?
    } else {
        let text = a.points.as_deref().unwrap_or_default();
        let pts = text
            .split(';')
            .map(|p| numbers(p, None))
            .collect::<Result<Vec<_>, _>>()
            .map_err(CliError::Usage)?;
        let dim = pts.first().map_or(0, Vec::len);
        if pts.len() != 3 || !(2..=3).contains(&dim) || pts.iter().any(|p| p.len() != dim) {
            return Err(CliError::Usage(
                "--points takes three points of equal dimension 2 or 3".into(),
            ));
        }
        let get = |i: usize| [pts[i][0], pts[i][1], pts[i].get(2).copied().unwrap_or(0.0)];
        CurveTriple::from_points([get(0), get(1), get(2)]).map_err(input("--points"))?
    };
    let menger = matches!(a.mode, CurveMode::Menger | CurveMode::Both)
        .then(|| polyline_curvature(&t, CurvatureMode::Menger));
    let fh = matches!(a.mode, CurveMode::FinslerHaantjes | CurveMode::Both)
        .then(|| polyline_curvature(&t, CurvatureMode::FinslerHaantjes));
    Ok(Outcome::report(json!({
        "lengths": t.lengths(),
        "menger": menger,
        "finsler_haantjes": fh,
    })))
}
