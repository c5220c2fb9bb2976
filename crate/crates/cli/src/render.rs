//! Text and CSV rendering for the table and simulation subcommands.

use std::fmt::Write as _;

use anyhow::Result;
use serde::Serialize;

use ringhopf::phases::{QuadrantTable, RatioLocation};
use ringhopf::simulate::{BranchMeasurement, SweepRow};
use ringhopf::{CycleMeasurement, Error};

fn cells(q: &[RatioLocation; 3]) -> [String; 3] {
    q.map(|x| x.to_string())
}

pub fn tables_text(tables: &[QuadrantTable], discrepancies: bool) -> String {
    let mut s = String::new();
    for table in tables {
        let _ = writeln!(s, "{}", table.title());
        let _ = write!(s, "  {:<10} {:>5} {:>5} {:>5}", "b signs", "q1", "q2", "q3");
        if discrepancies {
            let _ = write!(s, "   published");
        }
        s.push('\n');
        for row in &table.rows {
            let b = format!("({},{},{})", row.b_signs[0], row.b_signs[1], row.b_signs[2]);
            let [q1, q2, q3] = cells(&row.quadrants);
            let _ = write!(s, "  {b:<10} {q1:>5} {q2:>5} {q3:>5}");
            if discrepancies {
                if let Some(r) = &row.reference {
                    let [r1, r2, r3] = cells(r);
                    let _ = write!(s, "   {r1} {r2} {r3}");
                }
                if row.discrepancy.is_some() {
                    s.push_str("   <- differs from lemma");
                }
            }
            s.push('\n');
        }
        s.push('\n');
    }
    s
}

/// Columns: case, omega, b1..b3, q1..q3; with `discrepancies` also the
/// published cells and a 0/1 flag.
pub fn tables_csv(tables: &[QuadrantTable], discrepancies: bool) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["case", "omega_sign", "b1", "b2", "b3", "q1", "q2", "q3"];
    if discrepancies {
        header.extend(["published", "discrepancy"]);
    }
    w.write_record(&header)?;
    for table in tables {
        for row in &table.rows {
            let mut rec = vec![
                table.case.to_string(),
                if table.omega_sign.value() > 0.0 {
                    "pos"
                } else {
                    "neg"
                }
                .to_string(),
            ];
            rec.extend(row.b_signs.iter().map(|s| s.to_string()));
            rec.extend(cells(&row.quadrants));
            if discrepancies {
                rec.push(
                    row.reference
                        .as_ref()
                        .map(|r| cells(r).join(" "))
                        .unwrap_or_default(),
                );
                rec.push(u8::from(row.discrepancy.is_some()).to_string());
            }
            w.write_record(&rec)?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[derive(Debug, Serialize)]
pub struct SimRow {
    pub requested_lambda: f64,
    pub lambda: f64,
    #[serde(serialize_with = "ser_result")]
    pub measurement: std::result::Result<CycleMeasurement, String>,
}

fn ser_result<S: serde::Serializer>(
    r: &std::result::Result<CycleMeasurement, String>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    #[serde(rename_all = "snake_case")]
    enum Tagged<'a> {
        Ok(&'a CycleMeasurement),
        Error(&'a str),
    }
    match r {
        Ok(m) => Tagged::Ok(m).serialize(s),
        Err(e) => Tagged::Error(e).serialize(s),
    }
}

impl SimRow {
    pub fn from_sweep(row: SweepRow) -> Self {
        SimRow {
            requested_lambda: row.lambda,
            lambda: row.lambda,
            measurement: row.result,
        }
    }

    pub fn from_branch(requested: f64, r: std::result::Result<BranchMeasurement, Error>) -> Self {
        match r {
            Ok(b) => SimRow {
                requested_lambda: requested,
                lambda: b.lambda,
                measurement: Ok(b.measurement),
            },
            Err(e) => SimRow {
                requested_lambda: requested,
                lambda: requested,
                measurement: Err(e.to_string()),
            },
        }
    }
}

/// One row per node and lambda, so the column count does not depend on `n`.
/// Failed lambdas get a single row with node 0 and empty numeric fields.
pub fn simulate_csv(rows: &[SimRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "requested_lambda",
        "lambda",
        "node",
        "period",
        "amplitude",
        "phase_diff",
        "h",
        "status",
    ])?;
    for row in rows {
        let head = [row.requested_lambda.to_string(), row.lambda.to_string()];
        match &row.measurement {
            Ok(m) => {
                for j in 0..m.amplitudes.len() {
                    w.write_record(head.iter().cloned().chain([
                        (j + 1).to_string(),
                        m.period.to_string(),
                        m.amplitudes[j].to_string(),
                        m.phase_diffs[j].to_string(),
                        m.h.to_string(),
                        "ok".to_string(),
                    ]))?;
                }
            }
            Err(e) => {
                w.write_record(head.iter().cloned().chain([
                    "0".to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    e.clone(),
                ]))?;
            }
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
