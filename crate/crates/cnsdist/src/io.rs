//! File formats for emitted artifacts.
//!
//! Everything round-trips: floats are written in shortest form that
//! parses back to the identical bits, and every writer takes a set of
//! `#` comment lines so callers can embed their run configuration.

use crate::engine::ClassCondDistributions;
use crate::eval::{EvalReport, IndexReport};
use crate::graph::Graph;
use crate::indices::ScoreTable;
use crate::pmf::{DistError, Pmf};
use serde_json::json;
use std::io::{self, BufRead, Write};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Dist(#[from] DistError),
}

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        message: message.into(),
    }
}

fn write_comments(w: &mut impl Write, format: &str, comments: &[String]) -> io::Result<()> {
    writeln!(w, "# cnsdist {format} v{FORMAT_VERSION}")?;
    for c in comments {
        writeln!(w, "# {c}")?;
    }
    Ok(())
}

/// Two-column CSV "w,probability", one row per support point, sorted by
/// w (a Pmf already is). `{}` formatting keeps the shortest digit string
/// that parses back to the same f64.
pub fn write_pmf_csv(w: &mut impl Write, pmf: &Pmf, comments: &[String]) -> io::Result<()> {
    write_comments(w, "pmf-csv", comments)?;
    writeln!(w, "w,probability")?;
    for (x, p) in pmf.iter() {
        writeln!(w, "{x},{p}")?;
    }
    Ok(())
}

pub fn read_pmf_csv(r: impl BufRead) -> Result<Pmf, IoError> {
    let mut support = Vec::new();
    let mut probs = Vec::new();
    let mut saw_header = false;
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !saw_header {
            if trimmed != "w,probability" {
                return Err(parse_err(line_no, "expected header 'w,probability'"));
            }
            saw_header = true;
            continue;
        }
        let (a, b) = trimmed
            .split_once(',')
            .ok_or_else(|| parse_err(line_no, "expected two comma-separated fields"))?;
        let x: f64 = a
            .trim()
            .parse()
            .map_err(|e| parse_err(line_no, format!("bad value '{a}': {e}")))?;
        let p: f64 = b
            .trim()
            .parse()
            .map_err(|e| parse_err(line_no, format!("bad probability '{b}': {e}")))?;
        support.push(x);
        probs.push(p);
    }
    if !saw_header {
        return Err(parse_err(0, "missing 'w,probability' header"));
    }
    Ok(Pmf::new(support, probs)?)
}

/// Whitespace edge list, one "u v" per line, canonical u < v order.
pub fn write_edge_list(w: &mut impl Write, graph: &Graph, comments: &[String]) -> io::Result<()> {
    write_comments(w, "edge-list", comments)?;
    for (u, v) in graph.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

/// Two-column CSV "original_label,dense_id" mapping input labels to the
/// contiguous ids used internally.
pub fn write_label_map_csv(w: &mut impl Write, labels: &[i64], comments: &[String]) -> io::Result<()> {
    write_comments(w, "label-map-csv", comments)?;
    writeln!(w, "original_label,dense_id")?;
    for (dense, label) in labels.iter().enumerate() {
        writeln!(w, "{label},{dense}")?;
    }
    Ok(())
}

/// Per-pair scores as CSV "u,v,score,class" with class c for linked and
/// d for unlinked pairs.
pub fn write_score_table_csv(
    w: &mut impl Write,
    table: &ScoreTable,
    comments: &[String],
) -> io::Result<()> {
    write_comments(w, "score-table-csv", comments)?;
    writeln!(w, "u,v,score,class")?;
    for e in table.connected() {
        writeln!(w, "{},{},{},c", e.u, e.v, e.score)?;
    }
    for e in table.unconnected() {
        writeln!(w, "{},{},{},d", e.u, e.v, e.score)?;
    }
    Ok(())
}

fn pmf_pairs(pmf: &Pmf) -> serde_json::Value {
    json!(pmf.iter().map(|(x, p)| vec![x, p]).collect::<Vec<_>>())
}

/// JSON form {chi_c, p_c: [[w,p]...] | null, p_d, p_a}.
pub fn distributions_to_json(d: &ClassCondDistributions) -> serde_json::Value {
    json!({
        "chi_c": d.chi_c,
        "p_c": d.p_c.as_ref().map(pmf_pairs),
        "p_d": d.p_d.as_ref().map(pmf_pairs),
        "p_a": pmf_pairs(&d.p_a),
    })
}

/// Wraps a result in the standard artifact envelope: format name,
/// version, and the run configuration that produced it.
pub fn artifact_json(
    format: &str,
    config: serde_json::Value,
    result: serde_json::Value,
) -> serde_json::Value {
    json!({
        "format": format!("cnsdist {format}"),
        "format_version": FORMAT_VERSION,
        "config": config,
        "result": result,
    })
}

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    match v {
        Some(x) => format!("{x:.digits$}"),
        None => "-".to_string(),
    }
}

fn fmt_pm(mean: Option<f64>, std: Option<f64>, digits: usize) -> String {
    match (mean, std) {
        (Some(m), Some(s)) => format!("{m:.digits$}±{s:.digits$}"),
        _ => "-".to_string(),
    }
}

/// Plain-text table of an evaluation report: one row per index, the
/// experimental mean±std next to the theoretical value for AUC and
/// precision, then the class medians.
pub fn render_eval_table(report: &EvalReport) -> String {
    let mut rows: Vec<[String; 7]> = vec![[
        "index".into(),
        "AUC(exp)".into(),
        "AUC(theory)".into(),
        "Prec(exp)".into(),
        "Prec(theory)".into(),
        "Prec(loose)".into(),
        "ξc−ξd".into(),
    ]];
    for r in &report.indices {
        rows.push(render_index_row(r));
    }
    let widths: Vec<usize> = (0..7)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap())
        .collect();
    let mut out = String::new();
    out.push_str(&format!(
        "n={} E={} <k>={:.4} eps={} reps={} comparisons={} L={} seed={}\n",
        report.nodes,
        report.edges,
        report.mean_degree,
        report.epsilon,
        report.repetitions,
        report.n_comparisons,
        report.top_l,
        report.seed,
    ));
    for (i, row) in rows.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}", w = w + cell.len() - cell.chars().count()))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if i == 0 {
            let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
            out.push_str(&"-".repeat(total));
            out.push('\n');
        }
    }
    out
}

fn render_index_row(r: &IndexReport) -> [String; 7] {
    [
        r.label.clone(),
        fmt_pm(r.auc_experimental_mean, r.auc_experimental_std, 3),
        fmt_opt(r.auc_theoretical, 3),
        fmt_pm(
            r.precision_experimental_mean,
            r.precision_experimental_std,
            3,
        ),
        fmt_opt(r.precision_theoretical, 3),
        fmt_opt(r.precision_theoretical_loose, 3),
        fmt_opt(r.median.map(|m| m.distance), 3),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::empirical_class_distributions;
    use crate::eval::{evaluate, EvalMode, EvalOptions};
    use crate::graph::{load_edge_list, ParseOptions};
    use crate::indices::IndexKind;
    use crate::models::{ProbModel, RingModel};

    #[test]
    fn pmf_csv_round_trips_exactly() {
        // awkward values: thirds, tiny probabilities, negative support
        let pmf = Pmf::new(
            vec![-0.1, 1.0 / 3.0, 2.5, 17.0 / 23.0 + 10.0],
            vec![1.0 / 3.0, 1e-300, 0.5, 1.0 / 6.0 - 1e-300],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_pmf_csv(&mut buf, &pmf, &["config: {\"q\":2}".into()]).unwrap();
        let back = read_pmf_csv(buf.as_slice()).unwrap();
        assert_eq!(pmf, back);
    }

    #[test]
    fn pmf_csv_rejects_garbage() {
        assert!(read_pmf_csv("w,probability\n1,notanumber\n".as_bytes()).is_err());
        assert!(read_pmf_csv("a,b\n1,0.5\n".as_bytes()).is_err());
        assert!(read_pmf_csv("".as_bytes()).is_err());
    }

    #[test]
    fn edge_list_round_trips_through_loader() {
        let g = ProbModel::from(RingModel::ws(60, 2, 0.3).unwrap()).sample(4);
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &g, &["seed: 4".into()]).unwrap();
        let loaded = load_edge_list(buf.as_slice(), &ParseOptions::default()).unwrap();
        assert_eq!(loaded.graph.edge_count(), g.edge_count());
        // labels are 0..n in first-seen order; re-map and compare edge sets
        let mut original: Vec<(u32, u32)> = g.edges().collect();
        let mut relabeled: Vec<(u32, u32)> = loaded
            .graph
            .edges()
            .map(|(u, v)| {
                let a = loaded.labels[u as usize] as u32;
                let b = loaded.labels[v as usize] as u32;
                (a.min(b), a.max(b))
            })
            .collect();
        original.sort_unstable();
        relabeled.sort_unstable();
        assert_eq!(original, relabeled);
    }

    #[test]
    fn label_map_format() {
        let mut buf = Vec::new();
        write_label_map_csv(&mut buf, &[10, -3, 7], &[]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(lines, ["original_label,dense_id", "10,0", "-3,1", "7,2"]);
    }

    #[test]
    fn score_table_csv_classes() {
        let g = Graph::from_edges(4, vec![(0u32, 1), (1, 2), (2, 3)]).unwrap();
        let table = ScoreTable::compute(&g, IndexKind::Cn, None).unwrap();
        let mut buf = Vec::new();
        write_score_table_csv(&mut buf, &table, &[]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| l.ends_with(",c")).count(), 3);
        assert_eq!(text.lines().filter(|l| l.ends_with(",d")).count(), 3);
        assert!(text.contains("0,2,1,d"));
    }

    #[test]
    fn distributions_json_shape() {
        let g = ProbModel::from(RingModel::ws(40, 2, 0.2).unwrap()).sample(1);
        let d = empirical_class_distributions(&g).unwrap();
        let v = distributions_to_json(&d);
        assert!(v["chi_c"].as_f64().unwrap() > 0.0);
        assert!(v["p_c"].is_array());
        let first = &v["p_a"][0];
        assert_eq!(first.as_array().unwrap().len(), 2);
        let total: f64 = v["p_a"]
            .as_array()
            .unwrap()
            .iter()
            .map(|pair| pair[1].as_f64().unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn eval_table_renders_all_rows() {
        let g = ProbModel::from(RingModel::ws(80, 3, 0.2).unwrap()).sample(9);
        let mut opts = EvalOptions::new(3);
        opts.mode = EvalMode::TheoryOnly;
        let report = evaluate(&g, &opts).unwrap();
        let text = render_eval_table(&report);
        for row in &report.indices {
            assert!(text.contains(&row.label), "missing row {}", row.label);
        }
        assert!(text.contains("AUC(theory)"));
        // theory-only: experimental columns show placeholders
        assert!(text.contains(" - "));
    }

    #[test]
    fn artifact_envelope_fields() {
        let v = artifact_json("cns-summary", json!({"seed": 3}), json!({"ok": true}));
        assert_eq!(v["format_version"], FORMAT_VERSION);
        assert_eq!(v["config"]["seed"], 3);
        assert_eq!(v["result"]["ok"], true);
    }
}
