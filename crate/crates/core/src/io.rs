//! CSV writers for every tabular output. Each writer emits a header row and
//! formats floats with Rust's shortest round-trip representation, so output
//! bytes depend only on the values.

use std::io::Write;

use crate::analysis::{ClusterCurvePoint, ComparisonRow, R0Table};
use crate::epidemic::{EpidemicConfig, InfectionEvent, RealizationStats};
use crate::qwalk::Geometry;

pub const DISTRIBUTION_HEADER: [&str; 3] = ["t", "position", "probability"];
pub const R0_HEADER: [&str; 7] = ["policy", "p", "tau", "runs", "seed", "r0_mean", "r0_stderr"];
pub const CLUSTER_HEADER: [&str; 8] =
    ["policy", "L", "p", "tau", "N", "runs", "mean_M", "stderr_M"];
pub const COMPARISON_HEADER: [&str; 12] = [
    "policy_q",
    "policy_c",
    "p",
    "tau",
    "runs",
    "r0_q",
    "r0_q_stderr",
    "r0_c",
    "r0_c_stderr",
    "ratio_q_over_c",
    "naive_p_tau",
    "converged",
];
pub const INFECTION_LOG_HEADER: [&str; 5] =
    ["step", "infector_id", "site_x", "site_y", "generation"];
pub const STATS_HEADER: [&str; 11] = [
    "policy",
    "L",
    "N",
    "p",
    "tau",
    "seed",
    "first_generation_infections",
    "total_infections",
    "cluster_size_M",
    "steps_to_extinction",
    "peak_active_walkers",
];

pub use csv::Error as CsvError;

type CsvResult = Result<(), CsvError>;

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out)
}

/// One row per `(t, position)`; positions with zero probability are kept so
/// every step has the same number of rows.
pub fn write_distributions<W: Write>(
    out: W,
    geometry: Geometry,
    dists: &[Vec<f64>],
    only_last: bool,
) -> CsvResult {
    let mut w = writer(out);
    w.write_record(DISTRIBUTION_HEADER)?;
    let skip = if only_last {
        dists.len().saturating_sub(1)
    } else {
        0
    };
    for (t, dist) in dists.iter().enumerate().skip(skip) {
        for (i, p) in dist.iter().enumerate() {
            w.write_record([t.to_string(), geometry.label(i).to_string(), p.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_r0_tables<W: Write>(out: W, tables: &[R0Table]) -> CsvResult {
    let mut w = writer(out);
    w.write_record(R0_HEADER)?;
    for c in tables.iter().flat_map(|t| &t.cells) {
        w.write_record([
            c.policy.to_string(),
            c.p.to_string(),
            c.tau.to_string(),
            c.runs.to_string(),
            c.seed.to_string(),
            c.mean.to_string(),
            c.stderr.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_cluster_curve<W: Write>(out: W, points: &[ClusterCurvePoint]) -> CsvResult {
    let mut w = writer(out);
    w.write_record(CLUSTER_HEADER)?;
    for pt in points {
        w.write_record([
            pt.policy.to_string(),
            pt.extent.to_string(),
            pt.p.to_string(),
            pt.tau.to_string(),
            pt.agents.to_string(),
            pt.runs.to_string(),
            pt.mean_m.to_string(),
            pt.stderr_m.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_comparison<W: Write>(out: W, rows: &[ComparisonRow]) -> CsvResult {
    let mut w = writer(out);
    w.write_record(COMPARISON_HEADER)?;
    for r in rows {
        w.write_record([
            r.quantum.policy.to_string(),
            r.classical.policy.to_string(),
            r.p.to_string(),
            r.tau.to_string(),
            r.quantum.runs.to_string(),
            r.quantum.mean.to_string(),
            r.quantum.stderr.to_string(),
            r.classical.mean.to_string(),
            r.classical.stderr.to_string(),
            r.ratio_q_over_c.to_string(),
            r.naive_p_tau.to_string(),
            r.converged.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_infection_log<W: Write>(out: W, log: &[InfectionEvent]) -> CsvResult {
    let mut w = writer(out);
    w.write_record(INFECTION_LOG_HEADER)?;
    for e in log {
        w.write_record([
            e.step.to_string(),
            e.infector.to_string(),
            e.site.0.to_string(),
            e.site.1.to_string(),
            e.generation.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_stats<W: Write>(
    out: W,
    config: &EpidemicConfig,
    stats: &RealizationStats,
) -> CsvResult {
    let mut w = writer(out);
    w.write_record(STATS_HEADER)?;
    w.write_record([
        config.policy.to_string(),
        config.extent.to_string(),
        config.agents.to_string(),
        config.p.to_string(),
        config.tau.to_string(),
        config.seed.to_string(),
        stats.first_generation_infections.to_string(),
        stats.total_infections.to_string(),
        stats.cluster_size_m.to_string(),
        stats.steps_to_extinction.to_string(),
        stats.peak_active_walkers.to_string(),
    ])?;
    w.flush()?;
    Ok(())
}
