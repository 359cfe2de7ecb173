//! CSV serialization: panels, sweep tables, loss reports.
//!
//! Numbers are written with 17 significant digits, which round-trips f64
//! exactly; files contain no timestamps, so identical inputs give identical
//! bytes.

use std::io::{self, BufRead, Write};

use crate::irf::{IrfPanel, ShockKind, COLUMNS};
use crate::saddle::SweepTable;
use crate::welfare::LossValue;

/// Round-trip-safe fixed formatting for f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

// ============================================================================
// IRF panels
// ============================================================================

/// One row per period; the shock column is headed `m` or `a`, which also
/// identifies the shock kind on read-back.
pub fn write_panel_csv<W: Write>(panel: &IrfPanel, mut w: W) -> io::Result<()> {
    write!(w, "t")?;
    for c in COLUMNS {
        write!(w, ",{}", panel.header(c))?;
    }
    writeln!(w)?;
    for t in 0..panel.horizon() {
        write!(w, "{t}")?;
        for c in COLUMNS {
            write!(w, ",{}", fmt_f64(panel.get(c, t)))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum CsvReadError {
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("panel csv: {0}")]
    Format(String),
}

pub fn read_panel_csv<R: BufRead>(r: R) -> Result<IrfPanel, CsvReadError> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| CsvReadError::Format("empty file".into()))??;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() != COLUMNS.len() + 1 || cols[0] != "t" {
        return Err(CsvReadError::Format(format!(
            "unexpected header `{header}`"
        )));
    }
    let shock_kind = match cols[1] {
        "m" => ShockKind::Monetary,
        "a" => ShockKind::Technology,
        other => {
            return Err(CsvReadError::Format(format!(
                "unknown shock column `{other}`"
            )))
        }
    };
    for (i, c) in COLUMNS.iter().enumerate().skip(1) {
        if cols[i + 1] != c.name() {
            return Err(CsvReadError::Format(format!(
                "column {} is `{}`, expected `{}`",
                i + 1,
                cols[i + 1],
                c.name()
            )));
        }
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != COLUMNS.len() + 1 {
            return Err(CsvReadError::Format(format!(
                "row has {} fields, expected {}",
                fields.len(),
                COLUMNS.len() + 1
            )));
        }
        let mut vals = Vec::with_capacity(COLUMNS.len());
        for f in &fields[1..] {
            vals.push(
                f.parse::<f64>()
                    .map_err(|_| CsvReadError::Format(format!("bad number `{f}`")))?,
            );
        }
        rows.push(vals);
    }
    let mut panel = IrfPanel::zeros(shock_kind, rows.len());
    for (t, row) in rows.iter().enumerate() {
        for (i, c) in COLUMNS.iter().enumerate() {
            panel.set(*c, t, row[i]);
        }
    }
    Ok(panel)
}

// ============================================================================
// Sweep tables
// ============================================================================

/// Fixed column order: parameter value first, then roots, multipliers, flags,
/// and an error column that is empty for solved rows.
pub fn write_sweep_csv<W: Write>(table: &SweepTable, mut w: W) -> io::Result<()> {
    writeln!(
        w,
        "{},xi1,xi2,omega_p,omega_x,omega_p_inf,omega_x_inf,determinate,ad_condition,prop1_condition,error",
        table.target.as_str()
    )?;
    for row in &table.rows {
        match &row.solution {
            Ok(s) => writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},",
                fmt_f64(row.value),
                fmt_f64(s.xi1),
                fmt_f64(s.xi2),
                fmt_f64(s.omega_p),
                fmt_f64(s.omega_x),
                fmt_f64(s.omega_p_inf),
                fmt_f64(s.omega_x_inf),
                s.determinate,
                s.ad_condition,
                s.prop1_condition
            )?,
            Err(e) => writeln!(
                w,
                "{},,,,,,,,,,{}",
                fmt_f64(row.value),
                e.to_string().replace(',', ";")
            )?,
        }
    }
    Ok(())
}

// ============================================================================
// Loss reports
// ============================================================================

pub struct LossRow {
    pub regime: String,
    pub lambda_h: f64,
    pub loss: LossValue,
}

pub fn write_loss_csv<W: Write>(rows: &[LossRow], mut w: W) -> io::Result<()> {
    writeln!(
        w,
        "regime,lambda_h,loss,gap_term,wage_term,price_term,surcharge"
    )?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.regime,
            fmt_f64(r.lambda_h),
            fmt_f64(r.loss.total),
            fmt_f64(r.loss.gap_term),
            fmt_f64(r.loss.wage_term),
            fmt_f64(r.loss.price_term),
            fmt_f64(r.loss.surcharge)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irf::{irf_monetary, irf_technology, ShockSpec};
    use crate::params::{ParameterName, Params};
    use crate::saddle::comparative_statics;

    #[test]
    fn panel_round_trip_is_exact() {
        let p = Params::benchmark();
        for panel in [
            irf_monetary(&p, &ShockSpec::new(ShockKind::Monetary, 0.01, 40).unwrap()).unwrap(),
            irf_technology(
                &p,
                &ShockSpec::new(ShockKind::Technology, -0.003, 17).unwrap(),
            )
            .unwrap(),
        ] {
            let mut buf = Vec::new();
            write_panel_csv(&panel, &mut buf).unwrap();
            let back = read_panel_csv(io::BufReader::new(&buf[..])).unwrap();
            assert_eq!(back.shock_kind, panel.shock_kind);
            assert_eq!(back.max_abs_diff(&panel), 0.0);
            assert_eq!(back, panel);
        }
    }

    #[test]
    fn panel_bytes_are_deterministic() {
        let p = Params::benchmark();
        let panel =
            irf_monetary(&p, &ShockSpec::new(ShockKind::Monetary, 0.01, 40).unwrap()).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_panel_csv(&panel, &mut a).unwrap();
        write_panel_csv(&panel, &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_csv_has_fixed_columns_and_error_rows() {
        let base = Params {
            eta_p: 50.0,
            ..Params::benchmark()
        };
        let t = comparative_statics(&base, ParameterName::LambdaH, &[0.0, 0.9]).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "lambda_h,xi1,xi2,omega_p,omega_x,omega_p_inf,omega_x_inf,determinate,ad_condition,prop1_condition,error"
        );
        let ok_row = lines.next().unwrap();
        assert!(ok_row.ends_with(','));
        let err_row = lines.next().unwrap();
        assert!(err_row.contains("indeterminate"));
    }
}
