//! `analyze`: block audit, mesh fit, Weyl profile, Λ(q) profile and ψ per
//! block for a stored set.

use lacunary::diagnostics::{golden_angles, lambda_q_profile, mesh_exponent_fit, weyl_profile, Angle};
use lacunary::fourier::psi_parameter;
use lacunary::relations::{block_traces, quasi_independence, Independence, SearchBudget};
use lacunary::seq::{BlockSchedule, SetRecord};
use lacunary::IntegerSet;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::OutDir;
use crate::plot::{Chart, Mark, Series};

/// Largest element for which norm profiles are attempted.
pub const NORM_DEGREE_CAP: u64 = 1 << 20;
/// Block traces up to this size are tested for quasi-independence.
pub const AUDIT_CAP: usize = 20;
const Q_GRID: [f64; 4] = [2.0, 4.0, 6.0, 8.0];
const WEYL_TOLERANCE: f64 = 0.02;

#[derive(Serialize)]
struct AuditRow {
    set_hash: String,
    n: u64,
    size: usize,
    independent: &'static str,
}

#[derive(Serialize)]
struct MeshRow {
    set_hash: String,
    limit: u64,
    count: usize,
}

#[derive(Serialize)]
struct MeshFitRow {
    set_hash: String,
    status: String,
    beta: Option<f64>,
    constant: Option<f64>,
    rms_residual: Option<f64>,
    accepted: Option<bool>,
}

#[derive(Serialize)]
struct WeylRow {
    set_hash: String,
    angle: String,
    n: u64,
    count: usize,
    re: Option<f64>,
    im: Option<f64>,
    modulus: Option<f64>,
    class: String,
}

#[derive(Serialize)]
struct LambdaQCsv {
    set_hash: String,
    q: f64,
    c_q: f64,
    witness: String,
    exponent: Option<f64>,
}

#[derive(Serialize)]
struct PsiRow {
    set_hash: String,
    n: u64,
    size: usize,
    psi: f64,
    best_p: f64,
}

#[derive(Debug, Default)]
pub struct AnalyzeOutcome {
    pub files: Vec<String>,
    /// Sub-analyses that ran out of budget.
    pub skipped: Vec<String>,
}

pub fn run(record: &SetRecord, blocks: &BlockSchedule, trials: usize, seed: u64, out: &OutDir) -> CliResult<AnalyzeOutcome> {
    let set = &record.elements;
    let set_hash = crate::config::short_hash(&record.to_json());
    let mut outcome = AnalyzeOutcome::default();
    let mut file = |p: std::path::PathBuf| outcome.files.push(p.display().to_string());

    let budget = SearchBudget::default();
    let traces = block_traces(set, blocks);
    let audit: Vec<AuditRow> = traces
        .iter()
        .map(|(n, t)| AuditRow {
            set_hash: set_hash.clone(),
            n: *n,
            size: t.len(),
            independent: if t.len() > AUDIT_CAP {
                "skipped"
            } else {
                match quasi_independence(t, &budget) {
                    Independence::Independent => "true",
                    Independence::Dependent(_) => "false",
                    Independence::Unknown => "unknown",
                }
            },
        })
        .collect();
    file(out.write_csv("audit.csv", &audit)?);

    let max = set.max().unwrap_or(0);
    let grid: Vec<u64> = (1..64).map(|k| 1u64 << k).take_while(|&n| n / 2 < max).collect();
    let mesh: Vec<MeshRow> =
        grid.iter().map(|&n| MeshRow { set_hash: set_hash.clone(), limit: n, count: set.count_up_to(n) }).collect();
    file(out.write_csv("mesh.csv", &mesh)?);
    let fit = mesh_exponent_fit(set, &grid);
    let fit_row = match &fit {
        Ok(f) => MeshFitRow {
            set_hash: set_hash.clone(),
            status: "fitted".into(),
            beta: Some(f.beta),
            constant: Some(f.constant),
            rms_residual: Some(f.rms_residual),
            accepted: Some(f.accepted),
        },
        Err(e) => MeshFitRow {
            set_hash: set_hash.clone(),
            status: format!("not fitted: {e}"),
            beta: None,
            constant: None,
            rms_residual: None,
            accepted: None,
        },
    };
    file(out.write_csv("mesh_fit.csv", &[fit_row])?);
    let mut chart = Chart::new("Mesh condition", "ln ln N", "ln |Λ ∩ [1, N]|").with(Series::new(
        "counts",
        Mark::Dots,
        mesh.iter().filter(|r| r.limit >= 3 && r.count > 0).map(|r| ((r.limit as f64).ln().ln(), (r.count as f64).ln())),
    ));
    if let Ok(f) = &fit {
        let line = mesh.iter().filter(|r| r.limit >= 3).map(|r| {
            let x = (r.limit as f64).ln().ln();
            (x, f.constant.ln() + f.beta * x)
        });
        chart = chart.with(Series::new(format!("fit β = {:.3}", f.beta), Mark::Line, line));
    }
    file(out.write("mesh.svg", &chart.render())?);

    let mut angles = vec![
        Angle::Zero,
        Angle::Rational { p: 1, q: 2 },
        Angle::Rational { p: 1, q: 3 },
        Angle::Rational { p: 1, q: 4 },
    ];
    angles.extend(golden_angles(4));
    let mut weyl = Vec::new();
    let mut chart = Chart::new("Weyl averages", "log2 N", "|A_N(t)|");
    if !set.is_empty() && !grid.is_empty() {
        let profile = weyl_profile(set, &angles, &grid, WEYL_TOLERANCE)?;
        for a in &profile.angles {
            let class = serde_json::to_string(&a.class).expect("class serializes").trim_matches('"').to_string();
            chart = chart.with(Series::new(
                a.angle.label(),
                Mark::Line,
                a.points.iter().filter_map(|p| Some(((p.n as f64).log2(), p.average?.norm()))),
            ));
            weyl.extend(a.points.iter().map(|p| WeylRow {
                set_hash: set_hash.clone(),
                angle: a.angle.label(),
                n: p.n,
                count: p.count,
                re: p.average.map(|z| z.re),
                im: p.average.map(|z| z.im),
                modulus: p.average.map(|z| z.norm()),
                class: class.clone(),
            }));
        }
    }
    file(out.write_csv("weyl.csv", &weyl)?);
    file(out.write("weyl.svg", &chart.render())?);

    let mut lq = Vec::new();
    let mut chart = Chart::new("Λ(q) constants", "q", "C_q lower estimate");
    if !set.is_empty() {
        match norm_guard(set).and_then(|()| Ok(lambda_q_profile(set, &Q_GRID, trials, seed)?)) {
            Ok(p) => {
                chart = chart.with(Series::new("C_q", Mark::Line, p.rows.iter().map(|r| (r.q, r.c_q))));
                chart = chart.with(Series::new("√(q/2)", Mark::Line, Q_GRID.iter().map(|&q| (q, (q / 2.0).sqrt()))));
                lq.extend(p.rows.iter().map(|r| LambdaQCsv {
                    set_hash: set_hash.clone(),
                    q: r.q,
                    c_q: r.c_q,
                    witness: serde_json::to_string(&r.witness).expect("witness serializes"),
                    exponent: p.exponent,
                }));
            }
            Err(e) => outcome.skipped.push(format!("lambda_q: {e}")),
        }
    }
    let mut file = |p: std::path::PathBuf| outcome.files.push(p.display().to_string());
    file(out.write_csv("lambda_q.csv", &lq)?);
    file(out.write("lambda_q.svg", &chart.render())?);

    let mut psi = Vec::new();
    let mut skipped = Vec::new();
    for (n, trace) in &traces {
        match norm_guard(trace).and_then(|()| Ok(psi_parameter(trace, &Q_GRID)?)) {
            Ok(est) => psi.push(PsiRow {
                set_hash: set_hash.clone(),
                n: *n,
                size: trace.len(),
                psi: est.norm.value,
                best_p: est.best_p,
            }),
            Err(e) => skipped.push(format!("psi of block {n}: {e}")),
        }
    }
    file(out.write_csv("psi.csv", &psi)?);
    outcome.skipped.extend(skipped);
    Ok(outcome)
}

fn norm_guard(set: &IntegerSet) -> CliResult<()> {
    match set.max() {
        Some(m) if m > NORM_DEGREE_CAP => Err(CliError::Library(lacunary::Error::ResourceExceeded {
            what: "norm profile degree",
            needed: u128::from(m),
            budget: u128::from(NORM_DEGREE_CAP),
        })),
        _ => Ok(()),
    }
}
