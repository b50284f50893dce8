//! Text formats: MatrixMarket coordinate files for symmetric matrices and a
//! plain pair list for the constraint set.
//!
//! Matrices are written with 17 significant digits, which round-trips every
//! finite f64 bit-exactly. Only the lower triangle is stored (the
//! MatrixMarket symmetric convention) and exact zeros are skipped. The pair
//! list stores both orientations of every pair; the reader verifies the
//! mirror is present so hand-edited asymmetric files are rejected.

use crate::linalg::{PairSet, SymMatrix};
use crate::{Error, Result};
use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

const MM_HEADER: &str = "%%MatrixMarket matrix coordinate real symmetric";

fn bad(path: &Path, what: impl std::fmt::Display) -> Error {
    Error::Io(format!("{}: {}", path.display(), what))
}

/// Writes a symmetric matrix in MatrixMarket coordinate format (1-based,
/// lower triangle, zeros skipped).
pub fn write_matrix(path: &Path, m: &SymMatrix) -> Result<()> {
    let n = m.n();
    let mut nnz = 0usize;
    for i in 0..n {
        for j in 0..=i {
            let v = m.get(i, j);
            if !v.is_finite() {
                return Err(bad(path, format!("non-finite entry at ({i}, {j})")));
            }
            if v != 0.0 {
                nnz += 1;
            }
        }
    }
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{MM_HEADER}")?;
    writeln!(w, "{n} {n} {nnz}")?;
    for i in 0..n {
        for j in 0..=i {
            let v = m.get(i, j);
            if v != 0.0 {
                writeln!(w, "{} {} {:.16e}", i + 1, j + 1, v)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a matrix written by [`write_matrix`]. Upper-triangle entries,
/// duplicates, out-of-range indices, and non-finite values are rejected.
pub fn read_matrix(path: &Path) -> Result<SymMatrix> {
    let mut lines = BufReader::new(File::open(path)?).lines();
    let header = lines
        .next()
        .ok_or_else(|| bad(path, "empty file"))??;
    let tokens: Vec<String> = header.split_whitespace().map(|t| t.to_lowercase()).collect();
    let want = ["%%matrixmarket", "matrix", "coordinate", "real", "symmetric"];
    if tokens.len() != want.len() || tokens.iter().zip(want).any(|(a, b)| a != b) {
        return Err(bad(path, format!("unsupported header `{header}`")));
    }

    let mut size_line = None;
    for line in lines.by_ref() {
        let line = line?;
        if line.starts_with('%') || line.trim().is_empty() {
            continue;
        }
        size_line = Some(line);
        break;
    }
    let size_line = size_line.ok_or_else(|| bad(path, "missing size line"))?;
    let dims: Vec<usize> = size_line
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| bad(path, format!("size line `{size_line}`: {e}"))))
        .collect::<Result<_>>()?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(bad(path, format!("size line `{size_line}` needs three fields")));
    };
    if rows != cols {
        return Err(bad(path, format!("matrix must be square, got {rows}x{cols}")));
    }
    if rows == 0 {
        return Err(bad(path, "empty matrix dimension"));
    }

    let mut m = SymMatrix::zeros(rows);
    let mut seen = BTreeSet::new();
    let mut read = 0usize;
    for line in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let [si, sj, sv] = fields[..] else {
            return Err(bad(path, format!("entry `{trimmed}` needs `i j value`")));
        };
        let i: usize = si.parse().map_err(|e| bad(path, format!("index `{si}`: {e}")))?;
        let j: usize = sj.parse().map_err(|e| bad(path, format!("index `{sj}`: {e}")))?;
        let v: f64 = sv.parse().map_err(|e| bad(path, format!("value `{sv}`: {e}")))?;
        if i < 1 || i > rows || j < 1 || j > rows {
            return Err(bad(path, format!("index ({i}, {j}) outside 1..={rows}")));
        }
        if j > i {
            return Err(bad(path, format!("upper-triangle entry ({i}, {j}) in symmetric file")));
        }
        if !v.is_finite() {
            return Err(bad(path, format!("non-finite value at ({i}, {j})")));
        }
        if !seen.insert((i, j)) {
            return Err(bad(path, format!("duplicate entry ({i}, {j})")));
        }
        m.set(i - 1, j - 1, v);
        read += 1;
    }
    if read != nnz {
        return Err(bad(path, format!("declared {nnz} entries, found {read}")));
    }
    Ok(m)
}

/// Writes the constraint pair list: a `n <dim>` header, then one 1-based
/// `i j` line per ordered pair (both orientations).
pub fn write_omega(path: &Path, dim: usize, omega: &PairSet) -> Result<()> {
    if let Some(m) = omega.max_index() {
        if m >= dim {
            return Err(bad(path, format!("pair index {m} outside dimension {dim}")));
        }
    }
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "n {dim}")?;
    for (i, j) in omega.iter() {
        writeln!(w, "{} {}", i + 1, j + 1)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a pair list written by [`write_omega`]. Diagonal pairs, indices
/// outside the header dimension, duplicates, and pairs missing their mirror
/// are rejected.
pub fn read_omega(path: &Path) -> Result<(usize, PairSet)> {
    let mut lines = BufReader::new(File::open(path)?).lines();
    let header = lines.next().ok_or_else(|| bad(path, "empty file"))??;
    let dim = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", d] => d
            .parse::<usize>()
            .map_err(|e| bad(path, format!("dimension `{d}`: {e}")))?,
        _ => return Err(bad(path, format!("expected `n <dim>` header, got `{header}`"))),
    };
    if dim == 0 {
        return Err(bad(path, "dimension must be positive"));
    }

    let mut raw = BTreeSet::new();
    for line in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let [si, sj] = fields[..] else {
            return Err(bad(path, format!("pair line `{trimmed}` needs `i j`")));
        };
        let i: usize = si.parse().map_err(|e| bad(path, format!("index `{si}`: {e}")))?;
        let j: usize = sj.parse().map_err(|e| bad(path, format!("index `{sj}`: {e}")))?;
        if i < 1 || i > dim || j < 1 || j > dim {
            return Err(bad(path, format!("pair ({i}, {j}) outside 1..={dim}")));
        }
        if i == j {
            return Err(bad(path, format!("diagonal pair ({i}, {j})")));
        }
        if !raw.insert((i - 1, j - 1)) {
            return Err(bad(path, format!("duplicate pair ({i}, {j})")));
        }
    }
    for &(i, j) in &raw {
        if !raw.contains(&(j, i)) {
            return Err(bad(path, format!("pair ({}, {}) lacks its mirror", i + 1, j + 1)));
        }
    }
    let omega = PairSet::from_pairs(raw)?;
    Ok((dim, omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use tempfile::tempdir;

    fn awkward_matrix() -> SymMatrix {
        let mut m = SymMatrix::from_diag(&[std::f64::consts::PI, 1.0 / 3.0, -7.25e-17]);
        m.set(0, 1, -1234.5678901234567);
        m.set(1, 2, 1e-300);
        m
    }

    #[test]
    fn matrix_round_trip_is_bit_exact() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.mtx");
        let m = awkward_matrix();
        write_matrix(&path, &m).unwrap();
        let back = read_matrix(&path).unwrap();
        assert_eq!(m.as_slice(), back.as_slice());
    }

    #[test]
    fn writes_are_deterministic_and_skip_zeros() {
        let dir = tempdir().unwrap();
        let p1 = dir.path().join("a.mtx");
        let p2 = dir.path().join("b.mtx");
        let m = awkward_matrix();
        write_matrix(&p1, &m).unwrap();
        write_matrix(&p2, &m).unwrap();
        let c1 = std::fs::read(&p1).unwrap();
        assert_eq!(c1, std::fs::read(&p2).unwrap());
        // Header + size + 5 stored entries (zeros at (2,0) skipped).
        assert_eq!(String::from_utf8(c1).unwrap().lines().count(), 2 + 5);
    }

    #[test]
    fn matrix_reader_rejects_malformed_files() {
        let dir = tempdir().unwrap();
        let write = |name: &str, content: &str| {
            let p = dir.path().join(name);
            std::fs::write(&p, content).unwrap();
            p
        };
        let cases = [
            ("banner.mtx", "%%MatrixMarket matrix array real general\n2 2 0\n"),
            ("upper.mtx", "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 5.0\n"),
            ("dup.mtx", "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n2 1 5.0\n2 1 4.0\n"),
            ("range.mtx", "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 5.0\n"),
            ("count.mtx", "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n2 1 5.0\n"),
            ("float.mtx", "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n2 1 abc\n"),
            ("rect.mtx", "%%MatrixMarket matrix coordinate real symmetric\n2 3 0\n"),
        ];
        for (name, content) in cases {
            let p = write(name, content);
            assert!(read_matrix(&p).is_err(), "{name} should be rejected");
        }
    }

    #[test]
    fn matrix_reader_skips_comments_and_blanks() {
        let dir = tempdir().unwrap();
        let p = dir.path().join("c.mtx");
        std::fs::write(
            &p,
            "%%MatrixMarket matrix coordinate real symmetric\n% a comment\n\n2 2 1\n\n2 1 5.0e-1\n",
        )
        .unwrap();
        let m = read_matrix(&p).unwrap();
        assert_eq!(m.get(0, 1), 0.5);
        assert_eq!(m.get(1, 0), 0.5);
    }

    #[test]
    fn omega_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("omega.pairs");
        let omega = PairSet::from_pairs([(0, 2), (1, 3)]).unwrap();
        write_omega(&path, 5, &omega).unwrap();
        let (dim, back) = read_omega(&path).unwrap();
        assert_eq!(dim, 5);
        assert_eq!(
            back.iter().collect::<Vec<_>>(),
            omega.iter().collect::<Vec<_>>()
        );
        // Both orientations present on disk.
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("1 3\n") && text.contains("3 1\n"));
    }

    #[test]
    fn omega_reader_rejects_malformed_files() {
        let dir = tempdir().unwrap();
        let write = |name: &str, content: &str| {
            let p = dir.path().join(name);
            std::fs::write(&p, content).unwrap();
            p
        };
        let cases = [
            ("asym.pairs", "n 4\n1 3\n"),
            ("diag.pairs", "n 4\n2 2\n2 2\n"),
            ("range.pairs", "n 4\n1 9\n9 1\n"),
            ("header.pairs", "dim 4\n1 3\n3 1\n"),
            ("dup.pairs", "n 4\n1 3\n3 1\n1 3\n"),
        ];
        for (name, content) in cases {
            let p = write(name, content);
            assert!(read_omega(&p).is_err(), "{name} should be rejected");
        }
    }

    #[test]
    fn empty_omega_is_fine() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("empty.pairs");
        write_omega(&path, 3, &PairSet::new()).unwrap();
        let (dim, omega) = read_omega(&path).unwrap();
        assert_eq!(dim, 3);
        assert!(omega.is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn matrix_round_trip_random(
            n in 1usize..7,
            vals in proptest::collection::vec(-1e12f64..1e12, 49),
        ) {
            let m = SymMatrix::from_fn(n, |i, j| vals[i * 7 + j]);
            let dir = tempdir().unwrap();
            let path = dir.path().join("r.mtx");
            write_matrix(&path, &m).unwrap();
            let back = read_matrix(&path).unwrap();
            prop_assert_eq!(m.as_slice(), back.as_slice());
        }

        #[test]
        fn omega_round_trip_random(pairs in proptest::collection::btree_set((0usize..9, 0usize..9), 0..12)) {
            let filtered: Vec<_> = pairs.into_iter().filter(|(i, j)| i != j).collect();
            let omega = PairSet::from_pairs(filtered).unwrap();
            let dir = tempdir().unwrap();
            let path = dir.path().join("o.pairs");
            write_omega(&path, 9, &omega).unwrap();
            let (dim, back) = read_omega(&path).unwrap();
            prop_assert_eq!(dim, 9);
            prop_assert_eq!(back.iter().collect::<Vec<_>>(), omega.iter().collect::<Vec<_>>());
        }
    }
}
