//! `report`: render a ledger to SVG charts and an HTML index. Nothing is
//! recomputed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{CliError, CliResult};
use crate::ledger::{self, LedgerRow};
use crate::output::OutDir;
use crate::plot::{Chart, Mark, Series};
use crate::verify::parse_points;

const FLOOR: f64 = 1e-9;

#[derive(Debug, Default)]
pub struct ReportOutcome {
    pub plots: Vec<String>,
    pub skipped_rows: Vec<(u64, String)>,
}

fn num(row: &LedgerRow, key: &str) -> Option<f64> {
    row.param(key)?.parse().ok()
}

fn grouped<'a>(rows: &[&'a LedgerRow], key: &str) -> BTreeMap<String, Vec<&'a LedgerRow>> {
    let mut out: BTreeMap<String, Vec<&LedgerRow>> = BTreeMap::new();
    for r in rows {
        out.entry(r.param(key).unwrap_or("").to_string()).or_default().push(r);
    }
    out
}

pub fn run(ledger_path: &Path, out: &OutDir) -> CliResult<ReportOutcome> {
    let (rows, skipped_rows) = ledger::read(ledger_path)?;
    if rows.is_empty() {
        return Err(CliError::Usage(format!("{}: ledger has no usable rows", ledger_path.display())));
    }
    let by_id = |pred: &dyn Fn(&str) -> bool| -> Vec<&LedgerRow> { rows.iter().filter(|r| pred(&r.bound_id)).collect() };
    let mut plots: Vec<(String, Chart)> = Vec::new();

    let counts = by_id(&|id| id == "lemma2_3");
    if !counts.is_empty() {
        let xs = |f: &dyn Fn(&LedgerRow) -> Option<f64>| -> Vec<(f64, f64)> {
            let mut v: Vec<(f64, f64)> =
                counts.iter().filter_map(|r| Some((num(r, "m")?.ln(), f(r)?))).collect();
            v.sort_by(|a, b| a.0.total_cmp(&b.0));
            v.dedup_by(|a, b| a.0 == b.0);
            v
        };
        let chart = Chart::new("Counts against σ", "ln M_n", "|Λ ∩ [1, M_n]|")
            .with(Series::new("σ/2", Mark::Line, xs(&|r| Some(num(r, "sigma")? / 2.0))))
            .with(Series::new("2σ", Mark::Line, xs(&|r| Some(num(r, "sigma")? * 2.0))))
            .with(Series::new("count", Mark::Dots, counts.iter().filter_map(|r| Some((num(r, "m")?.ln(), r.empirical)))));
        plots.push(("counts.svg".into(), chart));
    }

    let weyl = by_id(&|id| id == "weyl");
    if !weyl.is_empty() {
        let mut chart = Chart::new("Weyl average deviation", "log10 N", "mean worst |A_N − base average|");
        let mut analytic: Vec<(f64, f64)> = Vec::new();
        for (base, rs) in grouped(&weyl, "base") {
            chart = chart.with(Series::new(
                format!("empirical ({base})"),
                Mark::Line,
                rs.iter().filter_map(|r| Some((num(r, "n")?.log10(), r.empirical))),
            ));
            analytic.extend(rs.iter().filter_map(|r| Some((num(r, "n")?.log10(), r.analytic))));
        }
        chart = chart.with(Series::new("analytic", Mark::Dots, analytic));
        plots.push(("weyl.svg".into(), chart));
    }

    let mesh = by_id(&|id| id == "mesh");
    if !mesh.is_empty() {
        let mut chart = Chart::new("Mesh fits", "ln ln N", "ln count");
        for r in &mesh {
            let set = r.param("set").unwrap_or("set");
            let pts: Vec<(f64, f64)> = r
                .param("points")
                .map(parse_points)
                .unwrap_or_default()
                .into_iter()
                .filter(|&(n, c)| n >= 3.0 && c > 0.0)
                .map(|(n, c)| (n.ln().ln(), c.ln()))
                .collect();
            let c = num(r, "constant").unwrap_or(f64::NAN);
            let line: Vec<(f64, f64)> = pts.iter().map(|&(x, _)| (x, c.ln() + r.empirical * x)).collect();
            chart = chart
                .with(Series::new(set.to_string(), Mark::Dots, pts))
                .with(Series::new(format!("{set}: β = {:.3}", r.empirical), Mark::Line, line));
        }
        plots.push(("mesh.svg".into(), chart));
    }

    let lq = by_id(&|id| id == "lambda_q");
    if !lq.is_empty() {
        let mut chart = Chart::new("Λ(q) profile", "q", "C_q lower estimate");
        for (set, rs) in grouped(&lq, "set") {
            chart = chart.with(Series::new(set, Mark::Line, rs.iter().filter_map(|r| Some((num(r, "q")?, r.empirical)))));
        }
        plots.push(("lambda_q.svg".into(), chart));
    }

    let special = ["lemma2_3", "weyl", "mesh", "lambda_q"];
    let bounds = by_id(&|id| !special.contains(&id));
    if !bounds.is_empty() {
        let log = |v: f64| v.max(FLOOR).log10();
        let chart = Chart::new("Empirical (+3 s.e.) against analytic bounds", "row (see index)", "log10 value")
            .with(Series::new(
                "analytic",
                Mark::Bars(0.35),
                bounds.iter().enumerate().map(|(i, r)| (i as f64 - 0.2, log(r.analytic))),
            ))
            .with(Series::new(
                "empirical + 3 s.e.",
                Mark::Bars(0.35),
                bounds.iter().enumerate().map(|(i, r)| (i as f64 + 0.2, log(r.empirical + 3.0 * r.stderr))),
            ));
        plots.push(("bounds.svg".into(), chart));
    }

    let mut outcome = ReportOutcome { plots: Vec::new(), skipped_rows };
    for (name, chart) in &plots {
        outcome.plots.push(out.write(name, &chart.render())?.display().to_string());
    }
    out.write("index.html", &index(&plots, &rows, &bounds))?;
    Ok(outcome)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn index(plots: &[(String, Chart)], rows: &[LedgerRow], bounds: &[&LedgerRow]) -> String {
    let mut html = String::from("<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>lacunary report</title></head><body>\n");
    for (name, chart) in plots {
        let _ = writeln!(html, "<h2>{}</h2>\n<img src=\"{name}\" alt=\"{}\">", escape(&chart.title), escape(&chart.title));
    }
    html.push_str("<h2>Rows</h2>\n<table border=\"1\">\n<tr><th>#</th><th>bound</th><th>verdict</th><th>empirical</th><th>analytic</th><th>stderr</th><th>params</th><th>notes</th></tr>\n");
    for r in rows {
        let idx = bounds.iter().position(|b| std::ptr::eq(*b, r)).map_or(String::new(), |i| i.to_string());
        let _ = writeln!(
            html,
            "<tr><td>{idx}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td></tr>",
            escape(&r.bound_id),
            r.verdict,
            r.empirical,
            r.analytic,
            r.stderr,
            escape(&r.params),
            escape(&r.notes)
        );
    }
    html.push_str("</table>\n</body></html>\n");
    html
}
