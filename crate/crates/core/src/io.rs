//! Text formats: JSON for tables and reports, CSV for surfaces and sweeps.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::baseline::ComparisonRow;
use crate::error::{Error, Result};
use crate::mechanism::{MechanismTable, OutcomeRow};
use crate::model::{AuctionInstance, BuyerSpec, Outcome, ThresholdVector};
use crate::thresholds::SurfacePoint;

/// Significant digits written for every CSV number.
pub const CSV_SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDocument {
    v0: f64,
    buyers: Vec<BuyerSpec>,
    eta: Vec<f64>,
    rows: Vec<RowDocument>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowDocument {
    /// Bid profile as a bit string, buyer 0 first.
    omega: String,
    winner: Option<usize>,
    payments: Vec<f64>,
}

fn encode_outcome(omega: Outcome) -> String {
    omega.bits().map(|b| char::from(b'0' + b.as_u8())).collect()
}

fn decode_outcome(text: &str, n: usize, field: &str) -> Result<usize> {
    if text.len() != n {
        return Err(Error::invalid(
            field,
            format!("expected {n} bits, got {text:?}"),
        ));
    }
    text.chars()
        .enumerate()
        .try_fold(0usize, |code, (i, c)| match c {
            '0' => Ok(code),
            '1' => Ok(code | 1 << i),
            _ => Err(Error::invalid(
                field,
                format!("bits must be 0 or 1, got {text:?}"),
            )),
        })
}

impl MechanismTable {
    /// Pretty-printed JSON with the instance, thresholds and one row per bid profile.
    pub fn to_json(&self) -> String {
        let doc = TableDocument {
            v0: self.instance().v0(),
            buyers: self.instance().buyers().to_vec(),
            eta: self.eta().as_slice().to_vec(),
            rows: self
                .outcomes()
                .map(|omega| {
                    let row = self.row(omega);
                    RowDocument {
                        omega: encode_outcome(omega),
                        winner: row.winner,
                        payments: row.payments.clone(),
                    }
                })
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("table serializes");
        text.push('\n');
        text
    }

    /// Reads a table written by [`MechanismTable::to_json`].
    ///
    /// Rows may appear in any order but every bid profile must occur once.
    /// The contents are taken as given; nothing is recomputed.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TableDocument = serde_json::from_str(text)?;
        let instance = AuctionInstance::new(doc.v0, doc.buyers)?;
        let eta = ThresholdVector::new(&instance, doc.eta)?;
        let n = instance.len();
        let mut rows: Vec<Option<OutcomeRow>> = vec![None; instance.outcome_count()];
        for (k, row) in doc.rows.into_iter().enumerate() {
            let field = format!("rows[{k}].omega");
            let code = decode_outcome(&row.omega, n, &field)?;
            if rows[code].is_some() {
                return Err(Error::invalid(
                    field,
                    format!("duplicate profile {}", row.omega),
                ));
            }
            rows[code] = Some(OutcomeRow {
                winner: row.winner,
                payments: row.payments,
            });
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(code, row)| {
                row.ok_or_else(|| {
                    let omega = Outcome::from_code(code, n).expect("code in range");
                    Error::invalid("rows", format!("missing profile {}", encode_outcome(omega)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        MechanismTable::from_rows(instance, eta, rows)
    }
}

/// Pretty-printed JSON for reports and summaries, newline-terminated.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Decimal rendering with [`CSV_SIGNIFICANT_DIGITS`] significant digits and
/// trailing zeros removed.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", CSV_SIGNIFICANT_DIGITS - 1, x);
    let exponent: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    let decimals = (CSV_SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
    let mut text = format!("{x:.decimals$}");
    if text.contains('.') {
        let trimmed = text.trim_end_matches('0').trim_end_matches('.').len();
        text.truncate(trimmed);
    }
    if text == "-0" {
        text = "0".to_string();
    }
    text
}

/// Surface CSV: `eta_1..eta_N, gain, utility`.
pub fn write_surface_csv<W: Write>(writer: W, v0: f64, surface: &[SurfacePoint]) -> Result<()> {
    let n = surface.first().map_or(0, |p| p.eta.len());
    let mut out = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (1..=n).map(|i| format!("eta_{i}")).collect();
    header.push("gain".into());
    header.push("utility".into());
    out.write_record(&header)?;
    for point in surface {
        let tail = [point.gain, v0 + point.gain];
        let record = point.eta.iter().chain(&tail).map(|&x| format_number(x));
        out.write_record(record)?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Comparison CSV: `n, analog_mean, analog_se, binary_optimal, binary_random_mean, binary_random_se`.
pub fn write_comparison_csv<W: Write>(writer: W, rows: &[ComparisonRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record([
        "n",
        "analog_mean",
        "analog_se",
        "binary_optimal",
        "binary_random_mean",
        "binary_random_se",
    ])?;
    for row in rows {
        out.write_record([
            row.n_bidders.to_string(),
            format_number(row.analog_utility.mean),
            format_number(row.analog_utility.se),
            format_number(row.binary_optimal_utility),
            format_number(row.binary_random_utility.mean),
            format_number(row.binary_random_utility.se),
        ])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}
