//! Curve CSV files: a header `label,t0,…,tN` with the grid times, then one
//! row per curve holding an integer label and `N+1` values.

use std::io::Read;

use funcgauss_core::{Curve, Grid, Label, LabeledSample, Prior};

use crate::{HarnessError, Result};

/// A rectangular table of labelled curves as read from disk.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveTable {
    pub times: Vec<f64>,
    pub labels: Vec<i64>,
    pub rows: Vec<Vec<f64>>,
}

fn ingest(row: usize, column: usize, message: impl Into<String>) -> HarnessError {
    HarnessError::Ingest { row, column, message: message.into() }
}

pub fn read_curve_csv(reader: impl Read) -> Result<CurveTable> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(reader);
    let mut records = r.records();
    let header = match records.next() {
        Some(h) => h.map_err(|e| ingest(1, 1, e.to_string()))?,
        None => return Err(ingest(1, 1, "empty input")),
    };
    if header.get(0).map(str::trim) != Some("label") {
        return Err(ingest(1, 1, "first header cell must be `label`"));
    }
    let times = header
        .iter()
        .enumerate()
        .skip(1)
        .map(|(c, cell)| cell.trim().parse::<f64>().map_err(|_| ingest(1, c + 1, format!("`{cell}` is not a time"))))
        .collect::<Result<Vec<_>>>()?;
    if times.len() < 2 {
        return Err(ingest(1, 2, "need at least two time columns"));
    }
    if let Some(c) = times.windows(2).position(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
        return Err(ingest(1, c + 3, "times must increase"));
    }
    let (mut labels, mut rows) = (Vec::new(), Vec::new());
    for (i, rec) in records.enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| ingest(row, 1, e.to_string()))?;
        if rec.len() != times.len() + 1 {
            return Err(ingest(
                row,
                rec.len().min(times.len() + 1),
                format!("expected {} fields, found {}", times.len() + 1, rec.len()),
            ));
        }
        let label = rec[0]
            .trim()
            .parse::<i64>()
            .map_err(|_| ingest(row, 1, format!("`{}` is not an integer label", &rec[0])))?;
        let values = rec
            .iter()
            .enumerate()
            .skip(1)
            .map(|(c, cell)| match cell.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(ingest(row, c + 1, format!("`{cell}` is not a finite number"))),
            })
            .collect::<Result<Vec<_>>>()?;
        labels.push(label);
        rows.push(values);
    }
    if rows.is_empty() {
        return Err(ingest(2, 1, "no curves"));
    }
    Ok(CurveTable { times, labels, rows })
}

/// Writes rows with full-precision values.
pub fn write_curve_csv<'a>(times: &[f64], rows: impl IntoIterator<Item = (i64, &'a [f64])>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = std::iter::once("label".to_string()).chain(times.iter().map(f64::to_string)).collect();
    w.write_record(&header).expect("writing to memory");
    for (label, values) in rows {
        let rec: Vec<String> = std::iter::once(label.to_string()).chain(values.iter().map(f64::to_string)).collect();
        w.write_record(&rec).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is UTF-8")
}

pub fn sample_to_csv(sample: &LabeledSample) -> String {
    let times: Vec<f64> = sample.grid().points().collect();
    write_curve_csv(&times, sample.iter().map(|(c, l)| (l.index() as i64, c.values())))
}

impl CurveTable {
    pub fn to_csv(&self) -> String {
        write_curve_csv(&self.times, self.labels.iter().copied().zip(self.rows.iter().map(Vec::as_slice)))
    }

    /// The two distinct label values, smaller first.
    pub fn label_values(&self) -> Result<[i64; 2]> {
        let mut distinct = self.labels.clone();
        distinct.sort_unstable();
        distinct.dedup();
        match distinct[..] {
            [a, b] => Ok([a, b]),
            _ => Err(HarnessError::Format(format!("expected two label values, found {:?}", distinct))),
        }
    }

    /// Curves on the uniform grid of `[0,1]` with as many nodes as there are
    /// columns; the smaller label value becomes class 0.
    pub fn to_sample(&self, prior: Prior) -> Result<LabeledSample> {
        let [zero, _] = self.label_values()?;
        let grid = Grid::uniform(self.times.len() - 1)?;
        let curves = self.rows.iter().map(|r| Curve::new(grid, r.clone())).collect::<Result<Vec<_>, _>>()?;
        let labels = self.labels.iter().map(|&l| Label::from(l != zero)).collect();
        Ok(LabeledSample::new(curves, labels, prior)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "label,0,0.5,1\n0,1,2.5,-3\n1,0.1,0.2,0.30000000000000004\n";
        let table = read_curve_csv(text.as_bytes()).unwrap();
        assert_eq!(table.rows[1][2], 0.30000000000000004);
        assert_eq!(table.to_csv(), text);
        let s = table.to_sample(Prior::FromCounts).unwrap();
        assert_eq!(s.labels(), [Label::Zero, Label::One]);
    }

    #[test]
    fn diagnostics() {
        let err = read_curve_csv("label,0,1\n0,1,2\n1,1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, HarnessError::Ingest { row: 3, .. }), "{err}");
        let err = read_curve_csv("label,0,1\n0,1,x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, HarnessError::Ingest { row: 2, column: 3, .. }), "{err}");
        assert!(read_curve_csv("id,0,1\n".as_bytes()).is_err());
        assert!(read_curve_csv("label,0,0\n".as_bytes()).is_err());
        let three = read_curve_csv("label,0,1\n0,1,2\n1,1,1\n2,0,0\n".as_bytes()).unwrap();
        assert!(three.to_sample(Prior::FromCounts).is_err());
    }
}
