//! MatrixMarket coordinate (sparse) and array (dense) formats, real general.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::sparse::SparseMatrix;
use crate::{Error, Result};

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_matrix_market_from(BufReader::new(file), path)
}

/// Parses a coordinate real general matrix. `name` only labels errors.
pub fn read_matrix_market_from<R: BufRead>(
    reader: R,
    name: impl AsRef<Path>,
) -> Result<SparseMatrix> {
    let name = name.as_ref();
    let fail = |line: usize, message: String| Error::Parse {
        path: name.to_path_buf(),
        line,
        message,
    };

    let mut lines = reader.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (lineno, header) = match lines.next() {
        Some((k, l)) => (k, l.map_err(|e| Error::io(name, e))?),
        None => return Err(fail(1, "empty file".into())),
    };
    let fields: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    let ok = fields.len() == 5
        && fields[0] == "%%matrixmarket"
        && fields[1] == "matrix"
        && fields[2] == "coordinate"
        && (fields[3] == "real" || fields[3] == "integer")
        && fields[4] == "general";
    if !ok {
        return Err(fail(
            lineno,
            format!("expected '%%MatrixMarket matrix coordinate real general', found '{header}'"),
        ));
    }

    let mut size: Option<(usize, usize, usize)> = None;
    let mut columns: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut entries = 0usize;
    let mut last_line = lineno;

    for (lineno, line) in lines {
        let line = line.map_err(|e| Error::io(name, e))?;
        last_line = lineno;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        match size {
            None => {
                if parts.len() != 3 {
                    return Err(fail(lineno, format!("malformed size line '{t}'")));
                }
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| fail(lineno, format!("bad size value '{s}'")))
                };
                let (m, n, nnz) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
                size = Some((m, n, nnz));
                columns = vec![Vec::new(); n];
            }
            Some((m, n, nnz)) => {
                if parts.len() != 3 {
                    return Err(fail(lineno, format!("malformed entry '{t}'")));
                }
                if entries == nnz {
                    return Err(fail(
                        lineno,
                        format!("more than the declared {nnz} entries"),
                    ));
                }
                let index = |s: &str, bound: usize, what: &str| -> Result<usize> {
                    let k = s
                        .parse::<usize>()
                        .map_err(|_| fail(lineno, format!("bad {what} index '{s}'")))?;
                    if k == 0 || k > bound {
                        return Err(fail(
                            lineno,
                            format!("{what} index {k} out of bounds 1..={bound}"),
                        ));
                    }
                    Ok(k - 1)
                };
                let i = index(parts[0], m, "row")?;
                let j = index(parts[1], n, "column")?;
                let v: f64 = parts[2]
                    .parse()
                    .map_err(|_| fail(lineno, format!("bad value '{}'", parts[2])))?;
                if !v.is_finite() {
                    return Err(fail(lineno, format!("non-finite value '{}'", parts[2])));
                }
                if !seen.insert((i, j)) {
                    return Err(fail(
                        lineno,
                        format!("duplicate entry ({}, {})", i + 1, j + 1),
                    ));
                }
                entries += 1;
                if v != 0.0 {
                    columns[j].push((i, v));
                }
            }
        }
    }

    let Some((m, _, nnz)) = size else {
        return Err(fail(last_line, "missing size line".into()));
    };
    if entries != nnz {
        return Err(fail(
            last_line,
            format!("declared {nnz} entries but found {entries}"),
        ));
    }
    SparseMatrix::from_columns(m, columns)
}

/// Writes coordinate format with 17 significant digits, enough to
/// round-trip every `f64` exactly.
pub fn write_matrix_market(x: &SparseMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io = |e| Error::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(w, "%%MatrixMarket matrix coordinate real general").map_err(io)?;
    writeln!(w, "{} {} {}", x.rows(), x.cols(), x.nnz()).map_err(io)?;
    for (i, j, v) in x.triplets() {
        writeln!(w, "{} {} {:.16e}", i + 1, j + 1, v).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Writes dense column vectors (all of equal length) in array format,
/// column-major.
pub fn write_dense_array(columns: &[Vec<f64>], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let rows = columns.first().map_or(0, Vec::len);
    if let Some(c) = columns.iter().find(|c| c.len() != rows) {
        return Err(Error::dims("write_dense_array", rows, c.len()));
    }
    let io = |e| Error::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(w, "%%MatrixMarket matrix array real general").map_err(io)?;
    writeln!(w, "{} {}", rows, columns.len()).map_err(io)?;
    for c in columns {
        for v in c {
            writeln!(w, "{v:.16e}").map_err(io)?;
        }
    }
    w.flush().map_err(io)
}

/// Reads an array-format file back into its columns.
pub fn read_dense_array(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    let fail = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim()));
    match lines.next() {
        Some((_, h))
            if h.to_lowercase().split_whitespace().collect::<Vec<_>>()
                == ["%%matrixmarket", "matrix", "array", "real", "general"] => {}
        _ => {
            return Err(fail(
                1,
                "expected '%%MatrixMarket matrix array real general'".into(),
            ))
        }
    }
    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (k, size) = body
        .next()
        .ok_or_else(|| fail(2, "missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|s| {
            s.parse()
                .map_err(|_| fail(k, format!("bad size line '{size}'")))
        })
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(fail(k, format!("bad size line '{size}'")));
    };
    let mut columns = vec![Vec::with_capacity(rows); cols];
    for idx in 0..rows * cols {
        let (k, l) = body
            .next()
            .ok_or_else(|| fail(k, format!("expected {} values, found {idx}", rows * cols)))?;
        let v: f64 = l.parse().map_err(|_| fail(k, format!("bad value '{l}'")))?;
        columns[idx / rows.max(1)].push(v);
    }
    if let Some((k, _)) = body.next() {
        return Err(fail(k, "trailing values".into()));
    }
    Ok(columns)
}
