//! The four commands, producing text plus a pass/fail flag.

use klo_core::cato::{self, RestrictionTable};
use klo_core::CoxeterError;
use serde_json::json;
use thiserror::Error;

use crate::config::{ConfigError, Format, RunConfig};
use crate::figure::{render_svg, Figure};
use crate::report::Report;
use crate::suites::{self, Suite, SuiteError};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Suite(#[from] SuiteError),
}

/// Command output; `ok` is false only when a verification failed.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub ok: bool,
    pub summary: Option<String>,
}

impl Output {
    fn plain(text: String) -> Self {
        Output { text, ok: true, summary: None }
    }
}

/// `sum_w |P(w)\W|` with the per-`w` breakdown.
pub fn count(cfg: &RunConfig) -> Result<Output, CommandError> {
    let d = &cfg.datum;
    let format = cfg.format_for("count", Format::Csv, &[Format::Csv, Format::Json])?;
    let rows = cato::count_breakdown(d)?;
    let total: usize = rows.iter().map(|(_, n)| n).sum();
    let text = match format {
        Format::Json => {
            let breakdown: Vec<_> = rows.iter().map(|(w, n)| json!({"w": cato::element_name(d, w), "cosets": n})).collect();
            serde_json::to_string_pretty(&json!({"type": d.label(), "total": total, "breakdown": breakdown})).expect("json") + "\n"
        }
        _ => {
            let mut s = String::from("w,cosets\n");
            for (w, n) in &rows {
                s.push_str(&format!("{},{n}\n", cato::element_name(d, w)));
            }
            s.push_str(&format!("total,{total}\n"));
            s
        }
    };
    Ok(Output::plain(text))
}

/// The restriction table of the simples; only type A2 has a reference figure.
pub fn table(cfg: &RunConfig) -> Result<Output, CommandError> {
    cfg.format_for("table", Format::Csv, &[Format::Csv])?;
    if cfg.type_label() != "A2" {
        return Err(ConfigError::Unsupported { command: "table", expected: "type A2", got: cfg.type_label().to_string() }.into());
    }
    Ok(Output::plain(RestrictionTable::new(&cfg.datum)?.to_csv(&cfg.datum)))
}

pub fn verify(suite: Suite, cfg: &RunConfig) -> Result<Output, CommandError> {
    cfg.format_for("verify", Format::Json, &[Format::Json])?;
    if suite == Suite::M0 && cfg.datum.rank() > 2 {
        return Err(ConfigError::Unsupported { command: "verify m0", expected: "rank at most 2", got: cfg.type_label().to_string() }.into());
    }
    let report = Report::new(suites::run(suite, cfg)?);
    Ok(Output { text: report.to_json() + "\n", ok: report.ok(), summary: Some(report.summary()) })
}

pub fn figure(cfg: &RunConfig) -> Result<Output, CommandError> {
    cfg.format_for("figure", Format::Svg, &[Format::Svg])?;
    let fig = Figure::build(&cfg.datum, cfg.radius)?
        .ok_or_else(|| ConfigError::Unsupported { command: "figure", expected: "a rank 2 type", got: cfg.type_label().to_string() })?;
    Ok(Output::plain(render_svg(&cfg.datum, &fig)))
}
