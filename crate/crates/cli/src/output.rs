//! CSV and JSON renderings of experiment payloads.
//!
//! Floats use Rust's shortest round-trip formatting (never more than 17
//! significant digits), `-inf`/`inf`/`NaN` for non-finite values, LF line
//! endings and UTF-8.

use std::io::{self, Write};

use decolab::experiments::{CurvePoint, Payload, SampleStats, ScenarioConfig, ScenarioReport};
use serde::{Deserialize, Serialize};

pub const CURVE_HEADER: &str = "n,overlap_magnitude,offdiag_magnitude,purity,log_overlap";
pub const SAMPLE_HEADER: &str = "trials,count_plus,frequency_plus,expected,z_score";

/// JSON document wrapping one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEnvelope {
    pub tool_version: String,
    pub experiment: String,
    pub config_echo: ScenarioConfig,
    pub seed: u64,
    pub generated_at: String,
    pub rows_or_report: Payload,
}

fn float(x: f64) -> String {
    format!("{x}")
}

/// Curve rows in the order given; rejects an empty sequence.
pub fn write_csv<W: Write>(points: &[CurvePoint], out: &mut W) -> io::Result<()> {
    if points.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "no curve points to write"));
    }
    writeln!(out, "{CURVE_HEADER}")?;
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{}",
            p.n,
            float(p.overlap_magnitude),
            float(p.offdiag_magnitude),
            float(p.purity),
            float(p.log_overlap)
        )?;
    }
    Ok(())
}

/// A scenario report flattened to a single curve row.
pub fn report_row(report: &ScenarioReport) -> CurvePoint {
    CurvePoint {
        n: report.n_particles,
        overlap_magnitude: report.overlap_magnitude,
        offdiag_magnitude: report.offdiag_magnitude,
        purity: report.purity,
        log_overlap: report.log_overlap,
    }
}

pub fn write_sample_csv<W: Write>(stats: &SampleStats, out: &mut W) -> io::Result<()> {
    writeln!(out, "{SAMPLE_HEADER}")?;
    let z = stats.z_score.map(float).unwrap_or_default();
    writeln!(
        out,
        "{},{},{},{},{}",
        stats.trials,
        stats.count_plus,
        float(stats.frequency_plus),
        float(stats.expected),
        z
    )
}

pub fn write_payload_csv<W: Write>(payload: &Payload, out: &mut W) -> io::Result<()> {
    match payload {
        Payload::Curve(points) => write_csv(points, out),
        Payload::Scenario(report) => write_csv(&[report_row(report)], out),
        Payload::Sample(stats) => write_sample_csv(stats, out),
    }
}

pub fn write_json<W: Write>(envelope: &OutputEnvelope, out: &mut W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, envelope)?;
    writeln!(out)
}
