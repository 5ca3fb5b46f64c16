//! Text and binary exports: dissimilarity matrices and quality tables.

use std::fmt::Write;

use catmap_core::distance::DissimilarityMatrix;
use catmap_core::quality::QualityReport;

/// One CSV line per matrix row, values in shortest round-trip form.
pub fn matrix_csv(m: &DissimilarityMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.len() {
        let row: Vec<String> = m.row(i).iter().map(f64::to_string).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `n` as a little-endian u64, then the matrix as row-major little-endian f64.
pub fn matrix_binary(m: &DissimilarityMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + 8 * m.as_slice().len());
    out.extend_from_slice(&(m.len() as u64).to_le_bytes());
    for v in m.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Inverse of [`matrix_binary`]; `None` when the length does not match the header.
pub fn read_matrix_binary(bytes: &[u8]) -> Option<(usize, Vec<f64>)> {
    let n = u64::from_le_bytes(bytes.get(..8)?.try_into().ok()?) as usize;
    let body = &bytes[8..];
    if body.len() != n.checked_mul(n)?.checked_mul(8)? {
        return None;
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of eight")))
        .collect();
    Some((n, values))
}

const COLUMNS: [&str; 8] = ["method", "measure", "TW", "CT", "SC", "NS", "Avg NH", "Med NH"];

fn cells(r: &QualityReport) -> [String; 8] {
    [
        r.method.to_string(),
        r.measure.to_string(),
        format!("{:.4}", r.tw),
        format!("{:.4}", r.ct),
        format!("{:.4}", r.sc),
        format!("{:.4}", r.ns),
        format!("{:.4}", r.nh_mean),
        format!("{:.4}", r.nh_median),
    ]
}

pub fn quality_csv(rows: &[QualityReport]) -> String {
    let mut out = COLUMNS.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&cells(r).join(","));
        out.push('\n');
    }
    out
}

/// Markdown table with columns padded to equal width.
pub fn quality_markdown(rows: &[QualityReport]) -> String {
    let body: Vec<[String; 8]> = rows.iter().map(cells).collect();
    let widths: Vec<usize> = (0..COLUMNS.len())
        .map(|c| body.iter().map(|r| r[c].len()).fold(COLUMNS[c].len(), usize::max))
        .collect();
    let line = |cells: &mut dyn Iterator<Item = String>| {
        let mut s = String::from("|");
        for (c, w) in cells.zip(&widths) {
            let _ = write!(s, " {c:<w$} |");
        }
        s.push('\n');
        s
    };
    let mut out = line(&mut COLUMNS.iter().map(|c| c.to_string()));
    out.push_str(&line(&mut widths.iter().map(|&w| "-".repeat(w))));
    for r in body {
        out.push_str(&line(&mut r.into_iter()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use catmap_core::distance::DistanceMeasure;
    use catmap_core::projection::Method;

    fn report() -> QualityReport {
        QualityReport {
            method: Method::Mds,
            measure: DistanceMeasure::Overlap,
            k: 7,
            tw: 0.86,
            ct: 0.84,
            ns: 0.07,
            sc: 0.76,
            nh_per_attribute: vec![0.5, 0.7],
            nh_mean: 0.6,
            nh_median: 0.6,
        }
    }

    #[test]
    fn binary_round_trip() {
        let m = DissimilarityMatrix::euclidean(&[[0.0, 0.0], [3.0, 4.0], [0.0, 1.0]]);
        let bytes = matrix_binary(&m);
        assert_eq!(bytes.len(), 8 + 9 * 8);
        assert_eq!(&bytes[..8], &3u64.to_le_bytes());
        let (n, values) = read_matrix_binary(&bytes).unwrap();
        assert_eq!(n, 3);
        assert_eq!(values, m.as_slice());
        assert!(read_matrix_binary(&bytes[..bytes.len() - 1]).is_none());
    }

    #[test]
    fn matrix_csv_rows() {
        let m = DissimilarityMatrix::euclidean(&[[0.0, 0.0], [3.0, 4.0]]);
        assert_eq!(matrix_csv(&m), "0,5\n5,0\n");
    }

    #[test]
    fn quality_tables() {
        let csv = quality_csv(&[report()]);
        assert_eq!(csv, "method,measure,TW,CT,SC,NS,Avg NH,Med NH\nmds,overlap,0.8600,0.8400,0.7600,0.0700,0.6000,0.6000\n");
        let md = quality_markdown(&[report(), report()]);
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines.iter().all(|l| l.len() == lines[0].len()));
        assert!(lines[1].starts_with("| ---"));
    }
}
