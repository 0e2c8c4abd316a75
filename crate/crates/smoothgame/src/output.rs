//! JSON-lines transcripts, CSV summaries and the config hash.

use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use smoothgame_core::engine::{Round, Transcript};

use crate::error::CliResult;
use crate::registry::ResultRow;

/// Hex SHA-256 of the compact JSON encoding of `config` (object keys are
/// sorted, so equal configs hash equally).
pub fn config_hash(config: &Value) -> String {
    let digest = Sha256::digest(config.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn unix_timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// Outcome of checking the adversary's certificate after the game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateStatus {
    Pass,
    Fail,
    /// The adversary issued no certificate.
    None,
}

/// The one-line summary of a simulated game.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub learner: String,
    pub adversary: String,
    pub scenario: String,
    pub p: f64,
    pub q: f64,
    pub dimension: usize,
    pub horizon: usize,
    pub seed: u64,
    pub rounds: usize,
    pub counted: usize,
    pub loss: f64,
    pub certificate: CertificateStatus,
    pub config_hash: String,
}

impl Summary {
    pub fn new(
        tr: &Transcript,
        learner: String,
        adversary: String,
        certificate: CertificateStatus,
        hash: String,
    ) -> Self {
        Self {
            learner,
            adversary,
            scenario: tr.config.scenario.label(),
            p: tr.config.p,
            q: tr.config.q.value(),
            dimension: tr.config.dimension,
            horizon: tr.config.horizon,
            seed: tr.config.seed,
            rounds: tr.rounds.len(),
            counted: tr.counted_set().len(),
            loss: tr.cumulative_loss,
            certificate,
            config_hash: hash,
        }
    }
}

#[derive(Serialize)]
struct RoundLine<'a> {
    kind: &'static str,
    #[serde(flatten)]
    round: &'a Round,
}

/// Header line, one line per round, then the summary line.
pub fn write_transcript<W: Write + ?Sized>(
    out: &mut W,
    header: &Value,
    tr: &Transcript,
    summary: &Summary,
) -> CliResult<()> {
    writeln!(out, "{header}")?;
    for round in &tr.rounds {
        serde_json::to_writer(&mut *out, &RoundLine { kind: "round", round })?;
        writeln!(out)?;
    }
    let mut line = serde_json::to_value(summary)?;
    line["kind"] = json!("summary");
    writeln!(out, "{line}")?;
    Ok(())
}

fn write_comments<W: Write + ?Sized>(out: &mut W, comments: &[String]) -> CliResult<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    Ok(())
}

pub fn write_summary_csv<W: Write + ?Sized>(out: &mut W, summary: &Summary, comments: &[String]) -> CliResult<()> {
    write_comments(out, comments)?;
    let mut writer = csv::Writer::from_writer(out);
    writer.serialize(summary)?;
    writer.flush()?;
    Ok(())
}

pub fn write_rows_csv<W: Write + ?Sized>(out: &mut W, rows: &[ResultRow], comments: &[String]) -> CliResult<()> {
    write_comments(out, comments)?;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record([
        "suite",
        "experiment",
        "parameters",
        "measured",
        "expected",
        "bound",
        "tolerance",
        "pass",
        "wall_ms",
        "claim",
    ])?;
    for r in rows {
        writer.write_record([
            r.suite.to_string(),
            r.experiment.clone(),
            r.parameters.clone(),
            r.measured.to_string(),
            r.expected.to_string(),
            r.bound.to_string(),
            r.tolerance.to_string(),
            r.pass.to_string(),
            r.wall_ms.map_or_else(String::new, |w| format!("{w:.1}")),
            r.claim.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// One JSON object per row.
pub fn write_rows_json<W: Write + ?Sized>(out: &mut W, rows: &[ResultRow]) -> CliResult<()> {
    for r in rows {
        serde_json::to_writer(&mut *out, r)?;
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_and_key_order_free() {
        let a = json!({"p": 2.0, "q": 2.0});
        let b: Value = serde_json::from_str(r#"{"q": 2.0, "p": 2.0}"#).unwrap();
        assert_eq!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 64);
        assert_ne!(config_hash(&a), config_hash(&json!({"p": 3.0, "q": 2.0})));
    }
}
