use std::path::Path;

use harmonia::defect::{check_certificate, defect_relation_check, modified_defect_bound};
use harmonia::geodesy::{curvature_estimate_scan, discretize_metric, MetricKind};
use harmonia::nochka::{compute_nochka_weights, verify_nochka_properties, NochkaReport};
use harmonia::suite;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{csv_rows, Report};
use crate::{input, Common, Failure};

pub fn analyze(c: &Common, config: &Path, grid: Option<usize>) -> Result<(), Failure> {
    let s = input::surface(config, grid)?;
    let k = s.qc_constant()?;
    let hopf = s.hopf_poly();
    let h_max = s.domain().closed_samples().iter().map(|&z| hopf.eval(z).norm()).fold(0.0, f64::max);
    let ratio = if s.dimension() == 3 { Some(s.curvature_ratio_bound_check()?) } else { None };
    let induced = s.dimension() == 3;
    let field: Vec<_> = s
        .domain()
        .grid()
        .par_iter()
        .map(|p| {
            let k = if induced { s.curvature_induced(p.z) } else { s.curvature_klotz(p.z) };
            k.map(|k| (p.z, k))
        })
        .collect::<Result<_, _>>()?;
    let (k_min, k_max) =
        field.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, k)| (lo.min(*k), hi.max(*k)));

    let mut r = Report::new(c, "analyze")?;
    r.table("grid", &s.grid_csv()?)?;
    r.heatmap("curvature", s.domain(), &field, if induced { "K_ds2" } else { "K_Gamma" })?;
    let pass = ratio.as_ref().is_none_or(|r| r.holds);
    r.finish(
        pass,
        json!({
            "dimension": s.dimension(),
            "resolution": s.domain().grid_resolution(),
            "K": k,
            "h_max": h_max,
            "curvature_range": [k_min, k_max],
            "curvature_ratio": ratio,
        }),
    )
}

fn bullet_summary(report: &NochkaReport) -> Value {
    json!({
        "bullets": report.bullets,
        "failing_subsets": report.failing_subsets,
        "all_pass": report.all_pass(),
    })
}

pub fn verify(c: &Common, only: Option<&str>, supplied: Option<(&Path, &Path)>) -> Result<(), Failure> {
    let outcomes = suite::run(only, c.seed)?;
    for o in &outcomes {
        println!("{}", o.line());
    }
    let mut rows: Vec<Vec<String>> = outcomes
        .iter()
        .map(|o| vec![o.id.to_string(), o.suite.into(), o.title.into(), o.pass.to_string(), o.detail.clone()])
        .collect();
    let mut pass = outcomes.iter().all(|o| o.pass);

    let mut r = Report::new(c, "verify")?;
    let mut weights_result = Value::Null;
    if let Some((planes_path, weights_path)) = supplied {
        let planes = input::planes(planes_path)?;
        let w = input::weights(weights_path)?;
        if w.q() != planes.len() || planes.iter().any(|p| p.ambient_dim() != w.k + 1) {
            return Err(Failure::Input(format!(
                "weights for q = {}, k = {} do not match {} hyperplanes of dimension {}",
                w.q(),
                w.k,
                planes.len(),
                planes[0].ambient_dim()
            )));
        }
        let report = verify_nochka_properties(&w, &planes);
        let failed: Vec<String> = report.bullets.iter().filter(|b| !b.pass).map(|b| b.bullet.to_string()).collect();
        let detail = if failed.is_empty() {
            "all weight properties hold".to_string()
        } else {
            format!("failing bullets: {}", failed.join(" "))
        };
        println!("{} supplied weights: {detail}", if report.all_pass() { "PASS" } else { "FAIL" });
        rows.push(vec![
            "weights".into(),
            "nochka".into(),
            "supplied weights".into(),
            report.all_pass().to_string(),
            detail,
        ]);
        pass &= report.all_pass();
        r.table("weights-check", &report.to_csv())?;
        weights_result = bullet_summary(&report);
    }

    r.table("verify", &csv_rows(&["criterion", "suite", "title", "pass", "detail"], &rows)?)?;
    let criteria: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({"id": o.id, "suite": o.suite, "title": o.title, "pass": o.pass, "detail": o.detail}))
        .collect();
    let passed = outcomes.iter().filter(|o| o.pass).count();
    r.finish(
        pass,
        json!({
            "only": only,
            "criteria": criteria,
            "passed": passed,
            "total": outcomes.len(),
            "supplied_weights": weights_result,
        }),
    )
}

pub fn nochka(c: &Common, planes_path: &Path, subgeneral: Option<usize>) -> Result<(), Failure> {
    let planes = input::planes(planes_path)?;
    let k = planes[0].ambient_dim() - 1;
    let w = compute_nochka_weights(&planes, subgeneral.unwrap_or(k))?;
    let report = verify_nochka_properties(&w, &planes);

    let mut r = Report::new(c, "nochka")?;
    r.json("weights.json", &w)?;
    r.table("nochka", &report.to_csv())?;
    let mut results = bullet_summary(&report);
    results["q"] = json!(w.q());
    results["n"] = json!(w.n);
    results["k"] = json!(w.k);
    results["omega"] = json!(w.omega);
    results["theta"] = json!(w.theta);
    r.finish(report.all_pass(), results)
}

pub fn defect(
    c: &Common,
    config: &Path,
    planes_path: &Path,
    certificates: Option<&Path>,
    grid: Option<usize>,
) -> Result<(), Failure> {
    let (curve, domain) = input::curve(config, grid)?;
    let planes = input::planes(planes_path)?;
    let classical = defect_relation_check(&curve, &planes)?;
    let mut rows: Vec<Vec<String>> = classical
        .rows
        .iter()
        .map(|row| vec![row.index.to_string(), row.delta.to_string(), row.method.to_string()])
        .collect();

    let entries = match certificates {
        Some(p) => input::certificates(p)?,
        None => Vec::new(),
    };
    if let Some(e) = entries.iter().find(|e| e.plane >= planes.len()) {
        return Err(Failure::Input(format!("certificate names plane {} of {}", e.plane, planes.len())));
    }
    let mut checks = Vec::new();
    for e in &entries {
        let rep = check_certificate(&curve, &planes[e.plane], e.eta, &e.mu, &domain)?;
        checks.push(json!({
            "plane": e.plane,
            "eta": e.eta,
            "accepted": rep.accepted,
            "h1_worst": rep.h1_worst,
            "reasons": rep.reasons,
        }));
    }
    let mut modified = Vec::new();
    let mut certified: Vec<usize> = entries.iter().map(|e| e.plane).collect();
    certified.sort_unstable();
    certified.dedup();
    for j in certified {
        let certs: Vec<_> = entries.iter().filter(|e| e.plane == j).map(|e| (e.eta, e.mu.clone())).collect();
        let delta = modified_defect_bound(&curve, &planes[j], &certs, &domain)?;
        rows.push(vec![j.to_string(), delta.to_string(), "certificate".into()]);
        modified.push(json!({"plane": j, "delta_h": delta}));
    }

    let mut r = Report::new(c, "defect")?;
    r.table("defect", &csv_rows(&["hyperplane", "delta", "method"], &rows)?)?;
    // the relation is only claimed for hyperplanes in general position
    let pass = classical.holds || !classical.general_position;
    r.finish(
        pass,
        json!({
            "rows": classical.rows,
            "sum": classical.sum,
            "bound": classical.bound,
            "general_position": classical.general_position,
            "holds": classical.holds,
            "certificates": checks,
            "modified": modified,
        }),
    )
}

pub fn geodesic(c: &Common, config: &Path, metric: MetricKind, grid: Option<usize>) -> Result<(), Failure> {
    let s = input::surface(config, grid)?;
    let graph = discretize_metric(&s, metric)?;
    let field = graph.boundary_distances();
    let values: Vec<_> = field.points.iter().copied().zip(field.distances.iter().copied()).collect();
    let d_max = field.distances.iter().copied().fold(0.0, f64::max);
    let boundary = field.boundary.iter().filter(|b| **b).count();

    let mut r = Report::new(c, "geodesic")?;
    r.table("distance", &field.to_csv())?;
    r.heatmap("distance", s.domain(), &values, "d")?;
    r.finish(
        true,
        json!({
            "metric": metric,
            "resolution": field.resolution(),
            "nodes": field.distances.len(),
            "boundary_nodes": boundary,
            "d_center": field.at(s.domain().center()),
            "d_max": d_max,
        }),
    )
}

pub fn curvature_scan(c: &Common, config: &Path, directions: &Path, grid: Option<usize>) -> Result<(), Failure> {
    let s = input::surface(config, grid)?;
    let dirs = input::directions(directions)?;
    let scan = curvature_estimate_scan(&s, &dirs)?;
    let rows = vec![
        vec![
            "induced".to_string(),
            scan.sup_induced.to_string(),
            scan.argmax_induced[0].to_string(),
            scan.argmax_induced[1].to_string(),
        ],
        vec![
            "klotz".to_string(),
            scan.sup_klotz.to_string(),
            scan.argmax_klotz[0].to_string(),
            scan.argmax_klotz[1].to_string(),
        ],
    ];
    let mut r = Report::new(c, "curvature-scan")?;
    r.table("scan", &csv_rows(&["metric", "sup", "argmax_re", "argmax_im"], &rows)?)?;
    r.finish(
        scan.sup_induced.is_finite(),
        json!({
            "resolution": scan.resolution,
            "C": scan.sup_induced,
            "argmax": scan.argmax_induced,
            "C_gamma": scan.sup_klotz,
            "argmax_gamma": scan.argmax_klotz,
        }),
    )
}
