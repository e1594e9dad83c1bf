//! Numeric CSV ingestion with header auto-detection.

use std::path::Path;

use extremogram::{Error, Result, TimeSeries};

/// Read a numeric CSV into a time series, one observation per row.
///
/// The column count of the first data row fixes the dimension. A single
/// leading header row is skipped when it does not parse as numbers.
pub fn ingest_csv(path: &Path) -> Result<TimeSeries> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(file);

    let mut data: Vec<f64> = Vec::new();
    let mut dim: Option<usize> = None;
    for (idx, record) in reader.records().enumerate() {
        let row_number = idx + 1;
        let record = record.map_err(|e| Error::ParseRow {
            row: row_number,
            message: e.to_string(),
        })?;
        let fields: Vec<&str> = record.iter().filter(|f| !f.is_empty()).collect();
        if fields.is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(values) => {
                match dim {
                    None => dim = Some(values.len()),
                    Some(d) if d != values.len() => {
                        return Err(Error::ParseRow {
                            row: row_number,
                            message: format!(
                                "expected {} column(s), found {}",
                                d,
                                values.len()
                            ),
                        })
                    }
                    _ => {}
                }
                data.extend(values);
            }
            Err(_) if idx == 0 => {
                // non-numeric first row: treat as header
                continue;
            }
            Err(_) => {
                return Err(Error::ParseRow {
                    row: row_number,
                    message: "non-numeric field".into(),
                })
            }
        }
    }
    let dim = dim.ok_or(Error::EmptyInput)?;
    let series = TimeSeries::from_flat(data, dim)?;
    log::info!(
        "read {} rows of dimension {} from {}",
        series.len(),
        dim,
        path.display()
    );
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn plain_numeric_column() {
        let f = write_temp("1.0\n2.0\n3.0\n");
        let s = ingest_csv(f.path()).unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn header_row_is_skipped() {
        let f = write_temp("ret\n0.1\n-0.2\n");
        let s = ingest_csv(f.path()).unwrap();
        assert_eq!(s.values(), &[0.1, -0.2]);
    }

    #[test]
    fn bad_row_reports_its_number() {
        let f = write_temp("1.0\na,b\n3.0\n");
        match ingest_csv(f.path()) {
            Err(Error::ParseRow { row, .. }) => assert_eq!(row, 2),
            other => panic!("expected row error, got {:?}", other),
        }
    }

    #[test]
    fn inconsistent_width_rejected() {
        let f = write_temp("1.0,2.0\n3.0\n");
        assert!(ingest_csv(f.path()).is_err());
    }

    #[test]
    fn empty_file_rejected() {
        let f = write_temp("");
        assert!(matches!(ingest_csv(f.path()), Err(Error::EmptyInput)));
        let f = write_temp("header_only\n");
        assert!(matches!(ingest_csv(f.path()), Err(Error::EmptyInput)));
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            ingest_csv(Path::new("/nonexistent/file.csv")),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn two_column_rows() {
        let f = write_temp("x,y\n1.0,2.0\n3.0,4.0\n");
        let s = ingest_csv(f.path()).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.row(1), &[3.0, 4.0]);
    }
}
