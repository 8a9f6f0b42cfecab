use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// One labelled sample with sparse features.
///
/// Feature indices are 1-based and strictly increasing; missing indices are
/// implicit zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRecord {
    pub label: i8,
    pub features: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub records: Vec<DatasetRecord>,
    /// Largest feature index seen.
    pub dim: usize,
}

fn parse_label(tok: &str, line: usize) -> Result<i8> {
    let v: f64 = tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("malformed label '{tok}'"),
    })?;
    if v == 1.0 {
        Ok(1)
    } else if v == -1.0 || v == 0.0 {
        Ok(-1)
    } else {
        Err(Error::InvalidLabel(tok.to_string()))
    }
}

/// Parses `<label> <idx>:<val> ...` lines.
///
/// Labels `+1`/`1` map to `+1` and `-1`/`0` to `−1`. Blank lines and `#`
/// comments are skipped.
pub fn parse_libsvm<R: BufRead>(reader: R) -> Result<Dataset> {
    let mut records = Vec::new();
    let mut dim = 0;
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let label = parse_label(tokens.next().expect("non-empty line"), lineno)?;
        let mut features = Vec::new();
        let mut last = 0usize;
        for tok in tokens {
            let (idx, val) = tok.split_once(':').ok_or_else(|| Error::Parse {
                line: lineno,
                msg: format!("malformed token '{tok}'"),
            })?;
            let idx: usize = idx.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("malformed index in '{tok}'"),
            })?;
            let val: f64 = val.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("malformed value in '{tok}'"),
            })?;
            if idx == 0 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "feature indices are 1-based".into(),
                });
            }
            if idx <= last {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("non-increasing index {idx} after {last}"),
                });
            }
            if !val.is_finite() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("non-finite value in '{tok}'"),
                });
            }
            last = idx;
            features.push((idx, val));
        }
        dim = dim.max(last);
        records.push(DatasetRecord { label, features });
    }
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(Dataset { records, dim })
}

pub fn load_libsvm(path: &Path) -> Result<Dataset> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_libsvm(BufReader::new(file))
}

/// Writes records in LIBSVM format. Values use the shortest representation
/// that parses back to the same `f64`.
pub fn serialize_libsvm<W: Write>(records: &[DatasetRecord], mut out: W) -> std::io::Result<()> {
    for r in records {
        write!(out, "{:+}", r.label)?;
        for (i, v) in &r.features {
            write!(out, " {i}:{v:?}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Scales each feature dimension by its largest absolute value so all
/// values lie in `[−1, 1]`. Zeros stay zero, so sparsity is preserved.
pub fn normalize_max_abs(data: &mut Dataset) {
    let mut scale = vec![0.0f64; data.dim + 1];
    for r in &data.records {
        for &(i, v) in &r.features {
            scale[i] = scale[i].max(v.abs());
        }
    }
    for r in &mut data.records {
        for (i, v) in &mut r.features {
            if scale[*i] > 0.0 {
                *v /= scale[*i];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_basic_record() {
        let ds = parse_libsvm("+1 1:0.5 3:-1.2\n".as_bytes()).unwrap();
        assert_eq!(ds.records[0].label, 1);
        assert_eq!(ds.records[0].features, vec![(1, 0.5), (3, -1.2)]);
        assert!(ds.dim >= 3);
    }

    #[test]
    fn label_mapping_and_comments() {
        let text = "# header\n1 2:1\n\n0 1:1 # trailing\n-1 4:2\n+1 1:3\n";
        let ds = parse_libsvm(text.as_bytes()).unwrap();
        let labels: Vec<i8> = ds.records.iter().map(|r| r.label).collect();
        assert_eq!(labels, vec![1, -1, -1, 1]);
        assert_eq!(ds.dim, 4);
    }

    #[test]
    fn empty_file_is_an_error() {
        assert!(matches!(parse_libsvm("".as_bytes()), Err(Error::EmptyDataset)));
        assert!(matches!(parse_libsvm("# only\n\n".as_bytes()), Err(Error::EmptyDataset)));
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_libsvm("1 1:2\n-1 1:x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_libsvm("1 3:1 2:1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_libsvm("1 garbage\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(matches!(parse_libsvm("3 1:1\n".as_bytes()), Err(Error::InvalidLabel(_))));
    }

    #[test]
    fn normalization_maps_into_unit_box() {
        let mut ds = parse_libsvm("1 1:4 2:-0.5\n-1 1:-2 2:0.25\n".as_bytes()).unwrap();
        normalize_max_abs(&mut ds);
        assert_eq!(ds.records[0].features, vec![(1, 1.0), (2, -1.0)]);
        assert_eq!(ds.records[1].features, vec![(1, -0.5), (2, 0.5)]);
    }

    fn record_strategy() -> impl Strategy<Value = DatasetRecord> {
        (
            prop::bool::ANY,
            prop::collection::btree_map(1usize..200, -1e6f64..1e6, 0..12),
        )
            .prop_map(|(pos, feats)| DatasetRecord {
                label: if pos { 1 } else { -1 },
                features: feats.into_iter().collect(),
            })
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(records in prop::collection::vec(record_strategy(), 1..60)) {
            let mut buf = Vec::new();
            serialize_libsvm(&records, &mut buf).unwrap();
            let ds = parse_libsvm(buf.as_slice()).unwrap();
            prop_assert_eq!(ds.records, records);
        }
    }
}
