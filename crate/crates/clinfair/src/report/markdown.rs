use std::fmt::Write;

use crate::evaluate::{CvSummary, DiffSummary, MeanStd, METRIC_NAMES};

/// One experiment run to include in the report.
#[derive(Debug, Clone)]
pub struct RunEntry {
    pub name: String,
    pub summary: CvSummary,
}

/// One paired comparison between two named runs.
#[derive(Debug, Clone)]
pub struct ComparisonEntry {
    pub baseline: String,
    pub candidate: String,
    pub diff: DiffSummary,
}

fn fmt_mean_std(ms: &MeanStd) -> String {
    format!("{:.3} ± {:.3}", ms.mean, ms.std)
}

fn summary_table(out: &mut String, runs: &[RunEntry]) {
    write!(out, "| Metric |").unwrap();
    for run in runs {
        write!(out, " {} |", run.name).unwrap();
    }
    writeln!(out).unwrap();
    write!(out, "| --- |").unwrap();
    for _ in runs {
        write!(out, " --- |").unwrap();
    }
    writeln!(out).unwrap();
    for name in METRIC_NAMES {
        write!(out, "| {name} |").unwrap();
        for run in runs {
            match run.summary.metrics.get(name) {
                Some(ms) => write!(out, " {} |", fmt_mean_std(ms)).unwrap(),
                None => write!(out, " — |").unwrap(),
            }
        }
        writeln!(out).unwrap();
    }
}

fn comparison_table(out: &mut String, entry: &ComparisonEntry) {
    writeln!(
        out,
        "| Metric | Δ ({} − {}) | t | Significant |",
        entry.candidate, entry.baseline
    )
    .unwrap();
    writeln!(out, "| --- | --- | --- | --- |").unwrap();
    for name in METRIC_NAMES {
        let Some(stat) = entry.diff.metrics.get(name) else {
            writeln!(out, "| {name} | — | — | — |").unwrap();
            continue;
        };
        let delta = format!("{:.3} ± {:.3}", stat.mean, stat.std);
        let delta = if stat.significant {
            format!("**{delta}**")
        } else {
            delta
        };
        let t = stat
            .t_statistic
            .map_or_else(|| "—".to_string(), |t| format!("{t:.2}"));
        writeln!(
            out,
            "| {name} | {delta} | {t} | {} |",
            if stat.significant { "yes" } else { "no" }
        )
        .unwrap();
    }
}

/// Renders the aggregate markdown report: one cross-validated summary table
/// over all runs, then one paired-difference table per comparison, with
/// significant differences in bold.
pub fn render_report(runs: &[RunEntry], comparisons: &[ComparisonEntry]) -> String {
    let mut out = String::new();
    writeln!(out, "# Benzodiazepine administration fairness report\n").unwrap();
    writeln!(
        out,
        "Metrics are test-fold means ± standard deviation over {} completed fold(s) per run.\n",
        runs.iter()
            .map(|r| r.summary.n_folds.to_string())
            .collect::<Vec<_>>()
            .join("/")
    )
    .unwrap();

    writeln!(out, "## Cross-validated results\n").unwrap();
    if runs.is_empty() {
        writeln!(out, "No runs provided.\n").unwrap();
    } else {
        summary_table(&mut out, runs);
        writeln!(out).unwrap();
    }

    if !comparisons.is_empty() {
        writeln!(out, "## Paired comparisons\n").unwrap();
        for entry in comparisons {
            writeln!(out, "### {} vs {}\n", entry.candidate, entry.baseline).unwrap();
            comparison_table(&mut out, entry);
            writeln!(
                out,
                "\nTwo-sided paired t-test on per-fold differences, α = {}.\n",
                entry.diff.alpha
            )
            .unwrap();
        }
    }
    out
}
