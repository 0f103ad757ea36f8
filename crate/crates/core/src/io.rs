//! Signal and golden-reference CSV files.

use std::io::{Read, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;

use crate::error::{NftError, Result};
use crate::grid::Grid;

fn parse_err(line: u64, msg: impl Into<String>) -> NftError {
    NftError::Parse { line: line as usize, msg: msg.into() }
}

fn csv_err(e: csv::Error) -> NftError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => NftError::Io(io),
        kind => parse_err(line, format!("{kind:?}")),
    }
}

fn field(rec: &csv::StringRecord, i: usize, line: u64) -> Result<f64> {
    let s = rec.get(i).ok_or_else(|| parse_err(line, format!("missing column {}", i + 1)))?;
    s.trim().parse::<f64>().map_err(|e| parse_err(line, format!("`{s}`: {e}")))
}

fn expect_header(rdr: &mut csv::Reader<impl Read>, want: &[&str]) -> Result<()> {
    let head = rdr.headers().map_err(csv_err)?;
    let got: Vec<&str> = head.iter().map(str::trim).collect();
    if got != want {
        return Err(parse_err(1, format!("header {got:?}, expected {want:?}")));
    }
    Ok(())
}

/// Write `t,re_q,im_q` rows for the samples of `q` on `grid`.
pub fn write_signal_csv<W: Write>(w: W, grid: &Grid, q: &[Complex64]) -> Result<()> {
    if q.len() != grid.times().len() {
        return Err(NftError::LengthMismatch { expected: grid.times().len(), got: q.len() });
    }
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["t", "re_q", "im_q"]).map_err(csv_err)?;
    for (t, v) in grid.times().iter().zip(q) {
        wtr.write_record(&[format!("{t:.16e}"), format!("{:.16e}", v.re), format!("{:.16e}", v.im)])
            .map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Read unscaled samples `q(t_n)` from a `t,re_q,im_q` file. Times must match
/// the grid nodes to `1e-9 h`.
pub fn read_signal_csv<R: Read>(r: R, grid: &Grid) -> Result<Vec<Complex64>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    expect_header(&mut rdr, &["t", "re_q", "im_q"])?;
    let times = grid.times();
    let tol = 1e-9 * grid.h();
    let mut out = Vec::with_capacity(times.len());
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let t = field(&rec, 0, line)?;
        let n = out.len();
        match times.get(n) {
            Some(&tn) if (t - tn).abs() <= tol => {}
            Some(&tn) => return Err(parse_err(line, format!("t = {t} does not match grid node {tn}"))),
            None => return Err(NftError::LengthMismatch { expected: times.len(), got: n + 1 }),
        }
        out.push(Complex64::new(field(&rec, 1, line)?, field(&rec, 2, line)?));
    }
    if out.len() != times.len() {
        return Err(NftError::LengthMismatch { expected: times.len(), got: out.len() });
    }
    Ok(out)
}

/// One frozen reference column.
#[derive(Debug, Clone, PartialEq)]
pub struct Golden {
    pub header: Vec<String>,
    pub xi: Vec<f64>,
    pub values: Vec<Complex64>,
}

/// Write a golden file: one `#` provenance line, then `xi,re,im` rows.
pub fn write_golden<W: Write>(mut w: W, op: &str, params: &str, xi: &[f64], values: &[Complex64]) -> Result<()> {
    if xi.len() != values.len() {
        return Err(NftError::LengthMismatch { expected: xi.len(), got: values.len() });
    }
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    writeln!(w, "# oracle: {op}, params: {params}, generated: unix {stamp}")?;
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["xi", "re", "im"]).map_err(csv_err)?;
    for (x, v) in xi.iter().zip(values) {
        wtr.write_record(&[format!("{x:.17e}"), format!("{:.17e}", v.re), format!("{:.17e}", v.im)])
            .map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_golden<R: Read>(mut r: R) -> Result<Golden> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let header: Vec<String> = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| l.trim_start_matches('#').trim().to_string())
        .collect();
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    expect_header(&mut rdr, &["xi", "re", "im"])?;
    let (mut xi, mut values) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        xi.push(field(&rec, 0, line)?);
        values.push(Complex64::new(field(&rec, 1, line)?, field(&rec, 2, line)?));
    }
    Ok(Golden { header, xi, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;

    #[test]
    fn signal_roundtrip() {
        let grid = build_grid(-1.0, 1.0, 4).unwrap();
        let q: Vec<Complex64> = grid.times().iter().map(|&t| Complex64::new(t.cos(), t / 3.0)).collect();
        let mut buf = Vec::new();
        write_signal_csv(&mut buf, &grid, &q).unwrap();
        assert!(buf.starts_with(b"t,re_q,im_q\n"));
        assert_eq!(read_signal_csv(buf.as_slice(), &grid).unwrap(), q);
    }

    #[test]
    fn signal_errors_carry_lines() {
        let grid = build_grid(-1.0, 1.0, 2).unwrap();
        let bad = "t,re_q,im_q\n-1,0,0\n-0.5,x,0\n0,0,0\n0.5,0,0\n1,0,0\n";
        match read_signal_csv(bad.as_bytes(), &grid) {
            Err(NftError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let off = "t,re_q,im_q\n-1,0,0\n-0.4,0,0\n0,0,0\n0.5,0,0\n1,0,0\n";
        assert!(matches!(read_signal_csv(off.as_bytes(), &grid), Err(NftError::Parse { line: 3, .. })));
        let short = "t,re_q,im_q\n-1,0,0\n-0.5,0,0\n";
        assert!(matches!(read_signal_csv(short.as_bytes(), &grid), Err(NftError::LengthMismatch { .. })));
        let header = "time,re,im\n";
        assert!(matches!(read_signal_csv(header.as_bytes(), &grid), Err(NftError::Parse { line: 1, .. })));
    }

    #[test]
    fn golden_roundtrip() {
        let xi = [-0.5, 0.0, 0.25];
        let v = [Complex64::new(1.0 / 3.0, -2.0), Complex64::new(0.0, 1e-300), Complex64::new(-7.5, 0.1)];
        let mut buf = Vec::new();
        write_golden(&mut buf, "sech_analytic_ab", "A=4.4", &xi, &v).unwrap();
        let g = read_golden(buf.as_slice()).unwrap();
        assert_eq!(g.xi, xi);
        assert_eq!(g.values, v);
        assert_eq!(g.header.len(), 1);
        assert!(g.header[0].starts_with("oracle: sech_analytic_ab, params: A=4.4, generated: "));
    }
}
