use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::optimizers::{RunTrace, TraceRow};

pub const TRACE_HEADER: [&str; 5] = ["k", "queries", "f", "grad_norm_sq", "wall_ms"];

/// 17 significant digits: enough to reproduce any finite `f64` exactly.
fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_trace_to<W: Write>(trace: &RunTrace, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for r in &trace.rows {
        w.write_record([
            r.k.to_string(),
            r.queries.to_string(),
            fmt_real(r.f),
            fmt_real(r.grad_norm_sq),
            fmt_real(r.wall_ms),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn write_trace(trace: &RunTrace, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_trace_to(trace, file)
}

pub fn read_trace_from<R: Read>(input: R) -> Result<RunTrace> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(TRACE_HEADER) {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let field = |j: usize| -> Result<&str> {
            rec.get(j).ok_or_else(|| Error::Parse {
                line,
                msg: format!("missing column {}", TRACE_HEADER[j]),
            })
        };
        let bad = |j: usize| Error::Parse {
            line,
            msg: format!("malformed {}", TRACE_HEADER[j]),
        };
        rows.push(TraceRow {
            k: field(0)?.parse().map_err(|_| bad(0))?,
            queries: field(1)?.parse().map_err(|_| bad(1))?,
            f: field(2)?.parse().map_err(|_| bad(2))?,
            grad_norm_sq: field(3)?.parse().map_err(|_| bad(3))?,
            wall_ms: field(4)?.parse().map_err(|_| bad(4))?,
        });
    }
    Ok(RunTrace::from_rows(rows))
}

pub fn read_trace(path: &Path) -> Result<RunTrace> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_trace_from(file)
}
