//! Dense matrices over Gaussian rationals and exact rank computation.

use std::fmt;

use super::scalar::GaussianRational;

/// A dense `rows × cols` matrix of [`GaussianRational`] entries, row-major.
///
/// Target sizes here are tiny (a few hundred rows at most), so there is no
/// sparse storage; elimination skips zero entries instead.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, GaussianRational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> GaussianRational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        ExactMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Builds from integer rows; handy in tests.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix::from_fn(r, c, |i, j| GaussianRational::from_int(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussianRational {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussianRational) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        self.entries[r * self.cols + c] = v;
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn insert_block(&mut self, r0: usize, c0: usize, block: &ExactMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    /// Block-diagonal direct sum. Blocks with zero rows or columns still
    /// advance the opposite offset, which is exactly what degenerate
    /// singular blocks (null rows/columns) require.
    pub fn direct_sum<'a>(blocks: impl IntoIterator<Item = &'a ExactMatrix>) -> ExactMatrix {
        let blocks: Vec<&ExactMatrix> = blocks.into_iter().collect();
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = ExactMatrix::zero(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.insert_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn transpose(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "size mismatch"
        );
        ExactMatrix::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c) + other.get(r, c)
        })
    }

    pub fn scale(&self, s: &GaussianRational) -> ExactMatrix {
        ExactMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) * s)
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "size mismatch");
        ExactMatrix::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = GaussianRational::zero();
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                acc = &acc + &(a * other.get(k, c));
            }
            acc
        })
    }

    /// Exact rank by Gaussian elimination with exact division pivoting.
    ///
    /// Arithmetic is over an exact field, so any nonzero pivot is as good
    /// as any other and the result carries no tolerance.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let Some(pivot) = (rank..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            if pivot != rank {
                for c in col..a.cols {
                    let idx_a = pivot * a.cols + c;
                    let idx_b = rank * a.cols + c;
                    a.entries.swap(idx_a, idx_b);
                }
            }
            for r in rank + 1..a.rows {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col) / a.get(rank, col);
                for c in col..a.cols {
                    if a.get(rank, c).is_zero() {
                        continue;
                    }
                    let v = a.get(r, c) - &(&factor * a.get(rank, c));
                    a.set(r, c, v);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Dimension of the right nullspace: `cols − rank`.
    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }
}

impl fmt::Display for ExactMatrix {
    /// Debug text form: one line per row, entries comma-separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "{}", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{}:", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}
