//! Dataset ingestion (LIBSVM text, synthetic generators) and trace CSV files.

mod libsvm;
mod synthetic;
mod trace_csv;

pub use libsvm::{load_libsvm, normalize_max_abs, parse_libsvm, serialize_libsvm, Dataset, DatasetRecord};
pub use synthetic::make_synthetic_logreg_data;
pub use trace_csv::{read_trace, read_trace_from, write_trace, write_trace_to, TRACE_HEADER};
