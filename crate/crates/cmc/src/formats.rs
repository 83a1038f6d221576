//! CSV, OBJ and JSON artifacts. Numbers are written with Rust's shortest
//! round-trip formatting, so reading a file back yields the same bits.

use std::io::Write;
use std::path::Path;

use cmc_core::{Jet2, RotationType, Vec4};

use crate::CliError;

/// Write `bytes` to a temporary file next to `path`, then rename it over
/// `path`; readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn curve_header(kind: RotationType) -> Vec<String> {
    let mut h = vec!["u".to_string()];
    for c in kind.component_names() {
        h.extend([c.to_string(), format!("{c}_d1"), format!("{c}_d2")]);
    }
    h
}

fn csv_bytes(header: &[String], rows: impl Iterator<Item = Vec<f64>>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(row.iter().map(|x| x.to_string()))
            .map_err(err)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn curve_csv(kind: RotationType, rows: &[(f64, [Jet2; 3])]) -> Result<Vec<u8>, CliError> {
    csv_bytes(
        &curve_header(kind),
        rows.iter().map(|(u, c)| {
            let mut r = vec![*u];
            for j in c {
                r.extend([j.val, j.d1, j.d2]);
            }
            r
        }),
    )
}

/// Parse a curve CSV for `kind`; the header must name that type's columns.
pub fn read_curve_csv(path: &Path, kind: RotationType) -> Result<Vec<(f64, [Jet2; 3])>, CliError> {
    let bad = |m: String| CliError::Format(format!("{}: {m}", path.display()));
    let mut rd = csv::Reader::from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let header: Vec<String> = rd
        .headers()
        .map_err(|e| bad(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let want = curve_header(kind);
    if header != want {
        return Err(bad(format!(
            "expected columns {} for {kind}",
            want.join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let x: Vec<f64> = rec
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| bad(format!("row {}: `{s}` is not a number", i + 1)))
            })
            .collect::<Result<_, _>>()?;
        let jet = |k: usize| Jet2::new(x[1 + 3 * k], x[2 + 3 * k], x[3 + 3 * k]);
        rows.push((x[0], [jet(0), jet(1), jet(2)]));
    }
    if rows.len() < 2 {
        return Err(bad("need at least two rows".into()));
    }
    Ok(rows)
}

pub fn surface_csv(points: &[(f64, f64, Vec4)]) -> Result<Vec<u8>, CliError> {
    let header: Vec<String> = ["u", "v", "x1", "x2", "x3", "x4"]
        .map(String::from)
        .to_vec();
    csv_bytes(
        &header,
        points
            .iter()
            .map(|(u, v, p)| vec![*u, *v, p.x1, p.x2, p.x3, p.x4]),
    )
}

/// `"x1,x3,x4"` to coordinate indices.
pub fn parse_projection(s: &str) -> Result<[usize; 3], CliError> {
    let usage = || {
        CliError::Usage(format!(
            "--project expects three distinct names from x1..x4, got `{s}`"
        ))
    };
    let idx: Vec<usize> = s
        .split(',')
        .map(|t| match t.trim() {
            "x1" => Ok(0),
            "x2" => Ok(1),
            "x3" => Ok(2),
            "x4" => Ok(3),
            _ => Err(usage()),
        })
        .collect::<Result<_, _>>()?;
    match idx[..] {
        [a, b, c] if a != b && b != c && a != c => Ok([a, b, c]),
        _ => Err(usage()),
    }
}

/// Vertices in grid order (`nu` rows of `nv`) and one quad per grid cell.
pub fn obj(
    id: &str,
    projection: &str,
    axes: [usize; 3],
    points: &[(f64, f64, Vec4)],
    nu: usize,
    nv: usize,
) -> Vec<u8> {
    let mut s = format!("# cmc surface {id}\n# projection: {projection}\n");
    for (_, _, p) in points {
        let x = [p.x1, p.x2, p.x3, p.x4];
        s.push_str(&format!("v {} {} {}\n", x[axes[0]], x[axes[1]], x[axes[2]]));
    }
    for i in 0..nu.saturating_sub(1) {
        for j in 0..nv.saturating_sub(1) {
            let k = i * nv + j + 1;
            s.push_str(&format!("f {} {} {} {}\n", k, k + nv, k + nv + 1, k + 1));
        }
    }
    s.into_bytes()
}

pub fn json<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("reports serialize");
    v.push(b'\n');
    v
}
