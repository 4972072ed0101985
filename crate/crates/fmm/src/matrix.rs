//! Dense row-major matrices over an arbitrary [`Ring`].
//!
//! `Matrix<T>` is a plain container; arithmetic takes the ring context as an
//! explicit argument so the same storage works for every coefficient type.

use crate::ring::Ring;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("matrix parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("index ({0}, {1}) out of range for {2}x{3} matrix")]
    IndexOutOfRange(usize, usize, usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::DimMismatch("ragged row lengths".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.data
            .iter()
            .enumerate()
            .map(|(k, v)| (k / self.cols, k % self.cols, v))
    }

    /// Copy out the `sub_rows x sub_cols` block with top-left corner
    /// `(row0, col0)`; out-of-range source cells read as `pad`.
    pub fn submatrix(
        &self,
        row0: usize,
        col0: usize,
        sub_rows: usize,
        sub_cols: usize,
        pad: &T,
    ) -> Self {
        Self::from_fn(sub_rows, sub_cols, |i, j| {
            if row0 + i < self.rows && col0 + j < self.cols {
                self.get(row0 + i, col0 + j).clone()
            } else {
                pad.clone()
            }
        })
    }

    /// Zero-pad (with `pad`) up to `rows x cols`, the original at (0, 0).
    pub fn embed(&self, rows: usize, cols: usize, pad: &T) -> Result<Self, MatrixError> {
        if rows < self.rows || cols < self.cols {
            return Err(MatrixError::DimMismatch(format!(
                "cannot embed {}x{} into {}x{}",
                self.rows, self.cols, rows, cols
            )));
        }
        Ok(self.submatrix(0, 0, rows, cols, pad))
    }

    /// Paste `block` at `(row0, col0)`; the block must fit.
    pub fn paste(&mut self, row0: usize, col0: usize, block: &Self) -> Result<(), MatrixError> {
        if row0 + block.rows > self.rows || col0 + block.cols > self.cols {
            return Err(MatrixError::IndexOutOfRange(
                row0 + block.rows,
                col0 + block.cols,
                self.rows,
                self.cols,
            ));
        }
        for (i, j, v) in block.entries() {
            self.set(row0 + i, col0 + j, v.clone());
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
}

impl<T: Clone> Matrix<T> {
    pub fn zero<R: Ring<Elem = T>>(ring: &R, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, ring.zero())
    }

    pub fn identity<R: Ring<Elem = T>>(ring: &R, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    /// The standard basis matrix `e_{i,j}` (0-based indices).
    pub fn basis_unit<R: Ring<Elem = T>>(
        ring: &R,
        rows: usize,
        cols: usize,
        i: usize,
        j: usize,
    ) -> Self {
        assert!(i < rows && j < cols, "basis index out of range");
        Self::from_fn(rows, cols, |r, c| {
            if (r, c) == (i, j) {
                ring.one()
            } else {
                ring.zero()
            }
        })
    }

    pub fn add<R: Ring<Elem = T>>(&self, ring: &R, other: &Self) -> Result<Self, MatrixError> {
        self.zip(other, "add", |x, y| ring.add(x, y))
    }

    pub fn sub<R: Ring<Elem = T>>(&self, ring: &R, other: &Self) -> Result<Self, MatrixError> {
        self.zip(other, "sub", |x, y| ring.sub(x, y))
    }

    pub fn neg<R: Ring<Elem = T>>(&self, ring: &R) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| ring.neg(self.get(i, j)))
    }

    pub fn scale<R: Ring<Elem = T>>(&self, ring: &R, s: &T) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| ring.mul(s, self.get(i, j)))
    }

    fn zip(
        &self,
        other: &Self,
        op: &str,
        mut f: impl FnMut(&T, &T) -> T,
    ) -> Result<Self, MatrixError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(MatrixError::DimMismatch(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| f(x, y))
                .collect(),
        })
    }

    /// Textbook cubic product; the reference everything else is checked
    /// against.
    pub fn naive_multiply<R: Ring<Elem = T>>(
        &self,
        ring: &R,
        other: &Self,
    ) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimMismatch(format!(
                "multiply: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = ring.zero();
            for k in 0..self.cols {
                acc = ring.add(&acc, &ring.mul(self.get(i, k), other.get(k, j)));
            }
            acc
        }))
    }
}

/// Parse the text format: a `rows cols` header line, then one line per row
/// of whitespace-separated ring literals. `#` starts a comment.
pub fn parse_matrix<R: Ring>(ring: &R, input: &str) -> Result<Matrix<R::Elem>, MatrixError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(MatrixError::Parse {
        line: 0,
        msg: "empty input".into(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse())
        .collect::<Result<_, _>>()
        .map_err(|_| MatrixError::Parse {
            line: hline,
            msg: format!("bad header `{header}` (expected `rows cols`)"),
        })?;
    let [rows, cols] = dims[..] else {
        return Err(MatrixError::Parse {
            line: hline,
            msg: format!("bad header `{header}` (expected `rows cols`)"),
        });
    };
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let (lno, row) = lines.next().ok_or(MatrixError::Parse {
            line: hline,
            msg: format!("expected {rows} rows, input ended early"),
        })?;
        let toks: Vec<&str> = row.split_whitespace().collect();
        if toks.len() != cols {
            return Err(MatrixError::Parse {
                line: lno,
                msg: format!("expected {cols} entries, found {}", toks.len()),
            });
        }
        for t in toks {
            data.push(ring.parse_elem(t).map_err(|e| MatrixError::Parse {
                line: lno,
                msg: e.to_string(),
            })?);
        }
    }
    if let Some((lno, _)) = lines.next() {
        return Err(MatrixError::Parse {
            line: lno,
            msg: "trailing data after final row".into(),
        });
    }
    Ok(Matrix { rows, cols, data })
}

pub fn serialize_matrix<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> String {
    let mut out = format!("{} {}\n", m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", ring.format_elem(m.get(i, j)));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_rational, PrimeField, RationalField};
    use num_rational::BigRational;
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> RationalField {
        RationalField::new(BigRational::one()).unwrap()
    }

    #[test]
    fn naive_multiply_matches_hand_computed_product() {
        let ring = q();
        let a = parse_matrix(&ring, "2 3\n1 2 3\n4 5 6\n").unwrap();
        let b = parse_matrix(&ring, "3 2\n7 8\n9 10\n11 12\n").unwrap();
        // [1 2 3; 4 5 6] * [7 8; 9 10; 11 12] = [58 64; 139 154]
        let c = a.naive_multiply(&ring, &b).unwrap();
        let want = parse_matrix(&ring, "2 2\n58 64\n139 154\n").unwrap();
        assert_eq!(c, want);
    }

    #[test]
    fn shape_mismatch_reports_both_shapes() {
        let ring = q();
        let a = Matrix::zero(&ring, 2, 3);
        let b = Matrix::zero(&ring, 2, 3);
        let err = a.naive_multiply(&ring, &b).unwrap_err();
        assert!(err.to_string().contains("2x3 by 2x3"), "{err}");
    }

    #[test]
    fn identity_is_neutral() {
        let ring = PrimeField::new(101, BigRational::one()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = Matrix::from_fn(4, 4, |_, _| rng.gen_range(0..101u64));
        let id = Matrix::identity(&ring, 4);
        assert_eq!(a.naive_multiply(&ring, &id).unwrap(), a);
        assert_eq!(id.naive_multiply(&ring, &a).unwrap(), a);
    }

    #[test]
    fn embed_then_submatrix_round_trips() {
        let ring = q();
        let a = parse_matrix(&ring, "2 2\n1 2\n3 4\n").unwrap();
        let big = a.embed(5, 5, &ring.zero()).unwrap();
        assert_eq!(big.get(0, 1), &parse_rational("2").unwrap());
        assert!(ring.is_zero(big.get(4, 4)));
        assert_eq!(big.submatrix(0, 0, 2, 2, &ring.zero()), a);
    }

    #[test]
    fn parse_rejects_ragged_rows() {
        let ring = q();
        let err = parse_matrix(&ring, "2 2\n1 2\n3\n").unwrap_err();
        assert!(err.to_string().contains("expected 2 entries"), "{err}");
    }

    #[test]
    fn serialize_parse_round_trip() {
        let ring = q();
        let a = parse_matrix(&ring, "2 3\n1/2 -3 0\n7 2/9 -1/4\n").unwrap();
        let text = serialize_matrix(&ring, &a);
        assert_eq!(parse_matrix(&ring, &text).unwrap(), a);
        assert_eq!(text, "2 3\n1/2 -3 0\n7 2/9 -1/4\n");
    }

    #[test]
    fn basis_unit_has_single_one() {
        let ring = q();
        let e = Matrix::basis_unit(&ring, 3, 2, 2, 1);
        let ones: Vec<_> = e
            .entries()
            .filter(|(_, _, v)| !ring.is_zero(v))
            .map(|(i, j, _)| (i, j))
            .collect();
        assert_eq!(ones, vec![(2, 1)]);
    }
}
