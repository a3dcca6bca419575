//! Transcript serialization.
//!
//! The CSV form has one line per round with the columns
//! `t,assignment,forced,played,messages,referee_sum,guess,win`:
//!
//! * `assignment`: one digit per contestant giving half-apples (`0213` is
//!   `(0, 1, 1/2, 3/2)`), Alice first;
//! * `forced`, `played`, `referee_sum`, `win`: `0` or `1`;
//! * `messages`: the bits of parties `1..c` concatenated, e.g. `011`;
//! * `guess`: `even` or `odd`.
//!
//! `messages`, `referee_sum`, `guess` and `win` are empty for unplayed
//! rounds. The JSON summary is the serde form of [`Summary`] plus the
//! config.

use std::io::Write;

use serde::Serialize;

use super::engine::{Summary, Transcript};
use super::GameConfig;
use crate::error::Result;

pub const CSV_HEADER: [&str; 8] =
    ["t", "assignment", "forced", "played", "messages", "referee_sum", "guess", "win"];

/// Schema version stamped into JSON outputs.
pub const SCHEMA_VERSION: u32 = 1;

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub fn write_transcript_csv<W: Write>(transcript: &Transcript, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &transcript.rounds {
        let messages: String = r
            .messages
            .as_ref()
            .map(|m| m.iter().map(|&b| flag(b)).collect())
            .unwrap_or_default();
        w.write_record([
            r.t.to_string().as_str(),
            &r.deal.halves_string(),
            flag(r.forced),
            flag(r.played),
            &messages,
            r.referee_sum.map(flag).unwrap_or(""),
            &r.guess.map(|g| g.to_string()).unwrap_or_default(),
            r.win.map(flag).unwrap_or(""),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SummaryDocument<'a> {
    schema_version: u32,
    config: &'a GameConfig,
    summary: &'a Summary,
}

pub fn write_summary_json<W: Write>(transcript: &Transcript, out: W) -> Result<()> {
    serde_json::to_writer_pretty(
        out,
        &SummaryDocument {
            schema_version: SCHEMA_VERSION,
            config: &transcript.config,
            summary: &transcript.summary,
        },
    )?;
    Ok(())
}

/// Full transcript, every round included.
pub fn write_transcript_json<W: Write>(transcript: &Transcript, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, transcript)?;
    Ok(())
}
