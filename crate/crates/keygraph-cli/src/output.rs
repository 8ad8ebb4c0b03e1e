//! Renderers for the CLI: aligned text tables for humans, CSV rows and
//! JSON documents for machines. All floats go through the same
//! six-significant-digit formatter as the sweep CSV so the formats agree
//! on values.

use crate::DimensionRequest;
use keygraph::analysis::{Dimensioning, Prediction, Regime};
use keygraph::experiment::{fmt_sig6, CellResult, GofRow, SweepConfig};
use keygraph::models::ModelParams;
use serde_json::json;
use std::fmt::Write;
use std::path::Path;

fn scenario_banner(params: &ModelParams) -> String {
    format!(
        "n={} K={} P={} p={} k={}",
        params.n,
        params.ring_size,
        params.pool_size,
        fmt_sig6(params.on_prob),
        params.k
    )
}

fn regime_name(regime: Regime) -> &'static str {
    match regime {
        Regime::Subcritical => "subcritical",
        Regime::Critical => "critical",
        Regime::Supercritical => "supercritical",
    }
}

pub fn analyze_table(params: &ModelParams, prediction: &Prediction) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", scenario_banner(params));
    let rows = [
        ("key-share probability s", fmt_sig6(prediction.probs.share_prob)),
        ("edge probability q = p*s", fmt_sig6(prediction.probs.edge_prob)),
        (
            "surrogate p*K^2/P",
            fmt_sig6(prediction.probs.approx_edge_prob),
        ),
        ("alpha (deviation of q)", fmt_sig6(prediction.scaling.alpha)),
        ("beta (deviation of surrogate)", fmt_sig6(prediction.scaling.beta)),
        ("regime", regime_name(prediction.scaling.regime).to_string()),
        (
            "P[k-connected], asymptotic",
            fmt_sig6(prediction.prob_k_connected),
        ),
        (
            "P[min degree >= k], asymptotic",
            fmt_sig6(prediction.prob_min_degree_ge_k),
        ),
    ];
    for (label, value) in rows {
        let _ = writeln!(out, "{label:<32}{value}");
    }
    for (h, lambda) in prediction.degree_means.iter().enumerate() {
        let _ = writeln!(
            out,
            "{:<32}{}",
            format!("lambda_{h} (mean degree-{h} nodes)"),
            fmt_sig6(*lambda)
        );
    }
    out
}

pub fn analyze_csv(params: &ModelParams, prediction: &Prediction) -> String {
    let mut header = String::from("n,K,P,p,k,s,q,q_approx,alpha,beta,prob_kconn");
    let mut row = format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        params.n,
        params.ring_size,
        params.pool_size,
        fmt_sig6(params.on_prob),
        params.k,
        fmt_sig6(prediction.probs.share_prob),
        fmt_sig6(prediction.probs.edge_prob),
        fmt_sig6(prediction.probs.approx_edge_prob),
        fmt_sig6(prediction.scaling.alpha),
        fmt_sig6(prediction.scaling.beta),
        fmt_sig6(prediction.prob_k_connected),
    );
    for (h, lambda) in prediction.degree_means.iter().enumerate() {
        let _ = write!(header, ",lambda_{h}");
        let _ = write!(row, ",{}", fmt_sig6(*lambda));
    }
    format!("{header}\n{row}\n")
}

pub fn analyze_json(params: &ModelParams, prediction: &Prediction) -> String {
    let doc = json!({
        "params": params,
        "prediction": prediction,
    });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

pub fn simulate_table(config: &SweepConfig, cell: &CellResult) -> String {
    let params = ModelParams {
        n: config.n,
        ring_size: cell.ring_size,
        pool_size: config.pool_size,
        on_prob: cell.on_prob,
        k: config.k,
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "scenario: {}  trials={} seed={}",
        scenario_banner(&params),
        cell.trials,
        config.master_seed
    );
    let ci_label = format!(
        "{}% Wilson interval",
        fmt_sig6(config.confidence * 100.0)
    );
    let rows = [
        (
            "k-connected",
            format!("{} / {}", cell.count_k_connected, cell.trials),
        ),
        (
            "min degree >= k",
            format!("{} / {}", cell.count_min_degree_ge_k, cell.trials),
        ),
        (
            "min degree ok, not k-connected",
            format!("{} / {}", cell.count_gap, cell.trials),
        ),
        ("empirical P[k-connected]", fmt_sig6(cell.empirical_prob)),
        (
            ci_label.as_str(),
            format!("[{}, {}]", fmt_sig6(cell.ci_low), fmt_sig6(cell.ci_high)),
        ),
        ("analytical P[k-connected]", fmt_sig6(cell.analytical_prob)),
        ("alpha", fmt_sig6(cell.alpha)),
    ];
    for (label, value) in rows {
        let _ = writeln!(out, "{label:<32}{value}");
    }
    out
}

pub fn dimension_table(request: &DimensionRequest, dim: &Dimensioning) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "dimensioning: n={} P={} p={} k={} target={} mode={}",
        request.n,
        request.pool_size,
        fmt_sig6(request.on_prob),
        request.k,
        fmt_sig6(request.target),
        if request.approx { "surrogate" } else { "exact" },
    );
    let _ = writeln!(out, "{:<32}{}", "smallest ring size K", dim.ring_size);
    let _ = writeln!(
        out,
        "{:<32}{}",
        format!("predicted P at K={}", dim.ring_size),
        fmt_sig6(dim.prob)
    );
    if let Some(prev) = dim.prob_prev {
        let _ = writeln!(
            out,
            "{:<32}{}",
            format!("predicted P at K={}", dim.ring_size - 1),
            fmt_sig6(prev)
        );
    }
    out
}

pub fn dimension_csv(request: &DimensionRequest, dim: &Dimensioning) -> String {
    let mut out =
        String::from("n,P,p,k,target,mode,ring_size,prob_at_ring,prob_below_ring\n");
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{},{}",
        request.n,
        request.pool_size,
        fmt_sig6(request.on_prob),
        request.k,
        fmt_sig6(request.target),
        if request.approx { "surrogate" } else { "exact" },
        dim.ring_size,
        fmt_sig6(dim.prob),
        dim.prob_prev.map(fmt_sig6).unwrap_or_default(),
    );
    out
}

pub fn dimension_json(request: &DimensionRequest, dim: &Dimensioning) -> String {
    let doc = json!({
        "n": request.n,
        "pool_size": request.pool_size,
        "on_prob": request.on_prob,
        "k": request.k,
        "target": request.target,
        "mode": if request.approx { "surrogate" } else { "exact" },
        "result": dim,
    });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

pub fn degree_dist_table(params: &ModelParams, cell: &CellResult, rows: &[GofRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "degree diagnostics: {}  trials={}",
        scenario_banner(params),
        cell.trials
    );
    let _ = writeln!(
        out,
        "{:<3} {:>12} {:>16} {:>16} {:>10} {:>10}  {}",
        "h", "lambda_h", "P[phi_h=0] pred", "P[phi_h=0] emp", "|dev|", "3sigma", "ok"
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{:<3} {:>12} {:>16} {:>16} {:>10} {:>10}  {}",
            row.degree,
            fmt_sig6(row.lambda),
            fmt_sig6(row.predicted_zero_prob),
            fmt_sig6(row.empirical_zero_prob),
            fmt_sig6(row.deviation),
            fmt_sig6(row.three_sigma),
            if row.within_three_sigma { "yes" } else { "NO" }
        );
    }
    let _ = writeln!(
        out,
        "min degree >= k without k-connectivity: {} of {} trials ({})",
        cell.count_gap,
        cell.trials,
        fmt_sig6(cell.count_gap as f64 / cell.trials as f64)
    );
    out
}

pub fn degree_dist_csv(params: &ModelParams, cell: &CellResult, rows: &[GofRow]) -> String {
    let mut out = String::from(
        "n,K,P,p,k,trials,h,lambda,predicted_zero_prob,empirical_zero_prob,deviation,three_sigma,within\n",
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            params.n,
            params.ring_size,
            params.pool_size,
            fmt_sig6(params.on_prob),
            params.k,
            cell.trials,
            row.degree,
            fmt_sig6(row.lambda),
            fmt_sig6(row.predicted_zero_prob),
            fmt_sig6(row.empirical_zero_prob),
            fmt_sig6(row.deviation),
            fmt_sig6(row.three_sigma),
            row.within_three_sigma,
        );
    }
    out
}

pub fn degree_dist_json(config: &SweepConfig, cell: &CellResult, rows: &[GofRow]) -> String {
    let doc = json!({
        "config": config,
        "cell": cell,
        "rows": rows,
    });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

/// A gnuplot script plotting empirical probabilities with Wilson error
/// bars and the analytical curves, one pair of plot items per channel
/// probability. The script references the CSV by a path relative to its
/// own directory when both files share one.
pub fn gnuplot_script(config: &SweepConfig, csv_path: &Path, plot_path: &Path) -> String {
    let data_ref = if csv_path.parent() == plot_path.parent() {
        csv_path
            .file_name()
            .map(|name| name.to_string_lossy().into_owned())
            .unwrap_or_else(|| csv_path.display().to_string())
    } else {
        csv_path.display().to_string()
    };
    let image_name = plot_path
        .file_stem()
        .map(|stem| format!("{}.png", stem.to_string_lossy()))
        .unwrap_or_else(|| "sweep.png".to_string());

    let mut script = String::new();
    let _ = writeln!(script, "# generated by `keygraph sweep --emit-plot`");
    let _ = writeln!(script, "set datafile separator ','");
    let _ = writeln!(script, "set terminal pngcairo size 960,640");
    let _ = writeln!(script, "set output '{image_name}'");
    let _ = writeln!(script, "set xlabel 'key ring size K'");
    let _ = writeln!(script, "set ylabel 'P[{}-connected]'", config.k);
    let _ = writeln!(script, "set yrange [-0.02:1.02]");
    let _ = writeln!(script, "set key bottom right");
    let _ = writeln!(script, "plot \\");
    let mut items = Vec::new();
    for (index, &p) in config.p_values.iter().enumerate() {
        let p_text = fmt_sig6(p);
        let color = index + 1;
        items.push(format!(
            "  '{data_ref}' using 5:(strcol(4) eq '{p_text}' ? $10 : 1/0):(strcol(4) eq '{p_text}' ? $11 : 1/0):(strcol(4) eq '{p_text}' ? $12 : 1/0) \\\n    with yerrorbars pt 7 ps 0.6 lc {color} title 'empirical p={p_text}'"
        ));
        items.push(format!(
            "  '{data_ref}' using 5:(strcol(4) eq '{p_text}' ? $13 : 1/0) \\\n    with lines lc {color} title 'analytical p={p_text}'"
        ));
    }
    script.push_str(&items.join(", \\\n"));
    script.push('\n');
    script
}
