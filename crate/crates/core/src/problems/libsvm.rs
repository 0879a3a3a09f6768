//! LIBSVM / SVMlight text format: one sample per line,
//! `<label> <index>:<value> ...` with 1-based, strictly increasing indices.

use crate::error::ProblemError;
use crate::numeric::SparseMatrix;

/// Labeled samples with the logistic-regression matrix `K` (rows `−bᵢaᵢᵀ`).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSparseData {
    pub samples: usize,
    pub features: usize,
    pub k: SparseMatrix<f64>,
    pub labels: Vec<f64>,
}

fn parse_label(tok: &str, line: usize) -> Result<f64, ProblemError> {
    let v: f64 = tok.parse().map_err(|_| ProblemError::Parse { line, message: format!("invalid label `{tok}`") })?;
    if v == 1.0 {
        Ok(1.0)
    } else if v == -1.0 || v == 0.0 {
        Ok(-1.0)
    } else {
        Err(ProblemError::Parse { line, message: format!("label `{tok}` is not one of +1, -1, 1, 0") })
    }
}

/// Parses LIBSVM text. `features` overrides the feature count, which
/// otherwise is the largest index seen.
pub fn parse_libsvm(text: &[u8], features: Option<usize>) -> Result<LabeledSparseData, ProblemError> {
    let text = std::str::from_utf8(text).map_err(|e| ProblemError::Parse {
        line: text[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1,
        message: "input is not valid UTF-8".into(),
    })?;
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut labels = Vec::new();
    let mut max_index = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let label = parse_label(toks.next().expect("nonempty line"), line)?;
        let mut row: Vec<(usize, f64)> = Vec::new();
        for tok in toks {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| ProblemError::Parse { line, message: format!("malformed token `{tok}`") })?;
            let idx: i64 =
                idx.parse().map_err(|_| ProblemError::Parse { line, message: format!("malformed index in `{tok}`") })?;
            if idx <= 0 {
                return Err(ProblemError::Parse { line, message: format!("nonpositive index {idx}") });
            }
            let val: f64 =
                val.parse().map_err(|_| ProblemError::Parse { line, message: format!("malformed value in `{tok}`") })?;
            if !val.is_finite() {
                return Err(ProblemError::Parse { line, message: format!("non-finite value in `{tok}`") });
            }
            let col = (idx - 1) as usize;
            if let Some(&(prev, _)) = row.last() {
                if col <= prev {
                    return Err(ProblemError::Parse { line, message: format!("index {idx} does not increase") });
                }
            }
            max_index = max_index.max(col + 1);
            // K row is −bᵢaᵢ.
            row.push((col, -label * val));
        }
        rows.push(row);
        labels.push(label);
    }
    if rows.is_empty() {
        return Err(ProblemError::Empty);
    }
    let n = match features {
        Some(n) if n < max_index => {
            return Err(ProblemError::Invalid(format!("feature count {n} is below the largest index {max_index}")))
        }
        Some(n) => n,
        None => max_index,
    };
    let k = SparseMatrix::from_rows(n, &rows)?;
    Ok(LabeledSparseData { samples: rows.len(), features: n, k, labels })
}
