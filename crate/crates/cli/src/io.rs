//! Sample-file and report I/O. Samples are UTF-8 line-delimited JSON
//! records; a `.gz` extension switches both directions to gzip.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use bosonic_core::sampler::SampleRecord;
use flate2::read::MultiGzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use crate::error::{io_usage, CliError, CliResult};

fn is_gz(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "gz")
}

/// One shot per line. Gzip output carries a zeroed timestamp, so repeated
/// runs stay byte-identical.
pub fn write_samples(path: &Path, records: &[SampleRecord]) -> CliResult<()> {
    let file =
        File::create(path).map_err(|e| io_usage(&format!("create {}", path.display()), e))?;
    let mut sink: Box<dyn Write> = if is_gz(path) {
        Box::new(GzEncoder::new(BufWriter::new(file), Compression::default()))
    } else {
        Box::new(BufWriter::new(file))
    };
    for rec in records {
        let line = serde_json::to_string(rec)
            .map_err(|e| CliError::Numeric(format!("record serialization: {}", e)))?;
        sink.write_all(line.as_bytes())
            .and_then(|_| sink.write_all(b"\n"))
            .map_err(|e| io_usage(&format!("write {}", path.display()), e))?;
    }
    sink.flush()
        .map_err(|e| io_usage(&format!("write {}", path.display()), e))?;
    Ok(())
}

pub fn read_samples(path: &Path) -> CliResult<Vec<SampleRecord>> {
    let file =
        File::open(path).map_err(|e| io_usage(&format!("open {}", path.display()), e))?;
    let source: Box<dyn Read> = if is_gz(path) {
        Box::new(MultiGzDecoder::new(file))
    } else {
        Box::new(file)
    };
    let mut records = Vec::new();
    for (idx, line) in BufReader::new(source).lines().enumerate() {
        let line = line.map_err(|e| io_usage(&format!("read {}", path.display()), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: SampleRecord = serde_json::from_str(&line).map_err(|e| {
            CliError::Usage(format!("{}: line {}: {}", path.display(), idx + 1, e))
        })?;
        records.push(rec);
    }
    if records.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: no sample records",
            path.display()
        )));
    }
    Ok(records)
}

pub fn write_text(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents)
        .map_err(|e| io_usage(&format!("write {}", path.display()), e))
}

/// Data tables: one record per line, comma-separated floats. Blank lines,
/// `#` comments, and a single leading header line are tolerated.
pub fn read_float_rows(path: &Path, columns: usize) -> CliResult<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| io_usage(&format!("open {}", path.display()), e))?;
    let mut rows = Vec::new();
    let mut saw_data = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        // Accept comma- or whitespace-separated tables.
        let parsed: Result<Vec<f64>, _> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .map(|f| f.parse::<f64>())
            .collect();
        match parsed {
            Ok(vals) if vals.len() == columns => {
                rows.push(vals);
                saw_data = true;
            }
            Ok(vals) => {
                return Err(CliError::Usage(format!(
                    "{}: line {}: expected {} columns, got {}",
                    path.display(),
                    idx + 1,
                    columns,
                    vals.len()
                )));
            }
            Err(_) if !saw_data => {
                // Header line; skip only before any data row.
                continue;
            }
            Err(e) => {
                return Err(CliError::Usage(format!(
                    "{}: line {}: {}",
                    path.display(),
                    idx + 1,
                    e
                )));
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    Ok(rows)
}

/// Comma-separated float list from a flag value.
pub fn parse_float_list(arg: &str) -> CliResult<Vec<f64>> {
    arg.split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Usage(format!("'{}': {}", f.trim(), e)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use bosonic_core::sampler::Regime;
    use bosonic_core::states::PhotonPattern;

    fn rec(bin: u64) -> SampleRecord {
        SampleRecord {
            time_bin: bin,
            regime: Regime::Gbs,
            herald: PhotonPattern::new(vec![0, 0]),
            signal: PhotonPattern::new(vec![1, 0]),
        }
    }

    #[test]
    fn jsonl_round_trip_plain_and_gz() {
        let dir = tempfile::tempdir().unwrap();
        let records: Vec<SampleRecord> = (0..5).map(rec).collect();
        for name in ["samples.jsonl", "samples.jsonl.gz"] {
            let path = dir.path().join(name);
            write_samples(&path, &records).unwrap();
            let back = read_samples(&path).unwrap();
            assert_eq!(back, records);
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.jsonl");
        let good = serde_json::to_string(&rec(0)).unwrap();
        std::fs::write(&path, format!("{}\nnot json\n", good)).unwrap();
        let err = read_samples(&path).unwrap_err();
        assert!(err.message().contains("line 2"), "{}", err.message());
        assert_eq!(err.exit_code(), 2);

        std::fs::write(&path, "").unwrap();
        assert_eq!(read_samples(&path).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn float_tables_skip_headers_and_comments() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.csv");
        std::fs::write(&path, "delay,counts\n# comment\n-1.0, 90\n0.0,10\n1.0,92\n").unwrap();
        let rows = read_float_rows(&path, 2).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1], vec![0.0, 10.0]);

        std::fs::write(&path, "1.0,2.0\noops,3.0\n").unwrap();
        assert!(read_float_rows(&path, 2)
            .unwrap_err()
            .message()
            .contains("line 2"));
    }
}
