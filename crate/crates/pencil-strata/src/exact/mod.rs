//! Exact linear algebra on explicit pencils: evaluation, the block
//! matrices whose nullities encode Weyr characteristics, and rank-based
//! extraction of those characteristics.

mod matrix;
mod scalar;

pub use matrix::ExactMatrix;
pub use scalar::GaussianRational;

use crate::partitions::Partition;
use crate::structure::Eigenvalue;
use crate::{Error, Result};

/// An explicit pencil `L(λ) = λB + A` with `A`, `B` of equal size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitPencil {
    a: ExactMatrix,
    b: ExactMatrix,
}

impl ExplicitPencil {
    /// Panics if `A` and `B` differ in size.
    pub fn new(a: ExactMatrix, b: ExactMatrix) -> Self {
        assert_eq!(
            (a.rows(), a.cols()),
            (b.rows(), b.cols()),
            "A and B must have equal size"
        );
        ExplicitPencil { a, b }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        ExplicitPencil {
            a: ExactMatrix::zero(rows, cols),
            b: ExactMatrix::zero(rows, cols),
        }
    }

    pub fn a(&self) -> &ExactMatrix {
        &self.a
    }

    pub fn b(&self) -> &ExactMatrix {
        &self.b
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    /// `L(μ) = A + μB`.
    pub fn eval(&self, mu: &GaussianRational) -> ExactMatrix {
        self.a.add(&self.b.scale(mu))
    }

    /// Direct sum of pencils, summand order preserved.
    pub fn direct_sum<'a>(blocks: impl IntoIterator<Item = &'a ExplicitPencil>) -> ExplicitPencil {
        let blocks: Vec<&ExplicitPencil> = blocks.into_iter().collect();
        ExplicitPencil {
            a: ExactMatrix::direct_sum(blocks.iter().map(|p| &p.a)),
            b: ExactMatrix::direct_sum(blocks.iter().map(|p| &p.b)),
        }
    }

    /// The reversal `rev L := λA + B`, exchanging the roles of 0 and ∞.
    pub fn reversal(&self) -> ExplicitPencil {
        ExplicitPencil {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }
}

/// Normal rank of `λB + A`: the rank over the field of rational functions.
///
/// Sampled as the maximum of `rank L(λ₀)` over the integer points
/// `λ₀ = 0, 1, …, min(m,n)`. The rank drops below the normal rank only at
/// the zeros of one not-identically-zero minor, a polynomial of degree at
/// most `min(m,n)`, so `min(m,n)+1` distinct points always attain it.
pub fn pencil_rank(pencil: &ExplicitPencil) -> usize {
    let bound = pencil.rows().min(pencil.cols());
    let mut best = 0;
    for point in 0..=bound as i64 {
        let r = pencil.eval(&GaussianRational::from_int(point)).rank();
        if r > best {
            best = r;
        }
        if best == bound {
            break;
        }
    }
    best
}

/// The `dm × dn` block lower-bidiagonal matrix with `L(μ)` on the diagonal
/// and `B` on the first subdiagonal. Its nullity is
/// `Σ_{i≤d} W_i(μ, L) + d·r₀(L)`.
pub fn build_p(pencil: &ExplicitPencil, mu: &GaussianRational, d: usize) -> ExactMatrix {
    assert!(d >= 1, "d must be positive");
    let (m, n) = (pencil.rows(), pencil.cols());
    let l_mu = pencil.eval(mu);
    let mut out = ExactMatrix::zero(d * m, d * n);
    for block in 0..d {
        out.insert_block(block * m, block * n, &l_mu);
        if block + 1 < d {
            out.insert_block((block + 1) * m, block * n, pencil.b());
        }
    }
    out
}

/// Coupled variant for pairwise distinct points `λ_1, …, λ_s`: diagonal
/// blocks `P_{λ_i}^{d_i}(L)` and a single copy of `B` in the top-right
/// corner of each subdiagonal block. Whatever the coupling, the nullity
/// equals that of the plain direct sum of the diagonal blocks.
pub fn build_coupled(
    pencil: &ExplicitPencil,
    points: &[GaussianRational],
    depths: &[usize],
) -> Result<ExactMatrix> {
    assert_eq!(points.len(), depths.len(), "one depth per point");
    assert!(!points.is_empty(), "at least one point");
    assert!(depths.iter().all(|&d| d >= 1), "depths must be positive");
    for (i, p) in points.iter().enumerate() {
        if points[..i].contains(p) {
            return Err(Error::RepeatedPoint(p.to_string()));
        }
    }
    let (m, n) = (pencil.rows(), pencil.cols());
    let total: usize = depths.iter().sum();
    let mut out = ExactMatrix::zero(total * m, total * n);
    let mut offset = 0;
    for (i, (point, &d)) in points.iter().zip(depths).enumerate() {
        out.insert_block(offset * m, offset * n, &build_p(pencil, point, d));
        if i > 0 {
            // top-right corner of the (i, i-1) block: row offset of this
            // diagonal block, last block column of the previous one
            out.insert_block(offset * m, (offset - 1) * n, pencil.b());
        }
        offset += d;
    }
    Ok(out)
}

/// Reads the Weyr characteristic of `L` at `eig` from nullities of the
/// `P_μ^d` matrices: `W_d = ν(P_μ^d) − ν(P_μ^{d−1}) − r₀`.
///
/// `d_max` must be at least the largest Jordan block size expected at
/// `eig`; `min(m, n)` always suffices. The infinite eigenvalue is read at
/// 0 of the reversal. A symbolic eigenvalue has no value to evaluate at
/// and is rejected, as is any computed sequence that fails to be a
/// non-increasing list of non-negative integers (that would indicate an
/// internal inconsistency, not a small `d_max`).
pub fn extract_weyr(pencil: &ExplicitPencil, eig: &Eigenvalue, d_max: usize) -> Result<Partition> {
    let mu = match eig {
        Eigenvalue::Finite(g) => g.clone(),
        Eigenvalue::Infinity => {
            return extract_weyr(&pencil.reversal(), &Eigenvalue::from_int(0), d_max)
        }
        Eigenvalue::Symbolic(label) => return Err(Error::SymbolicEigenvalue(label.clone())),
    };
    let r0 = pencil.cols() - pencil_rank(pencil);
    let mut parts = Vec::new();
    let mut prev_nullity = 0usize;
    for d in 1..=d_max {
        let nullity = build_p(pencil, &mu, d).nullity();
        let gain = nullity.checked_sub(prev_nullity).filter(|&g| g >= r0);
        let Some(gain) = gain else {
            return Err(Error::WeyrExtraction(format!(
                "negative W_{} at {}: nullity {} after {} with r0 {}",
                d, eig, nullity, prev_nullity, r0
            )));
        };
        parts.push(gain - r0);
        prev_nullity = nullity;
    }
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::WeyrExtraction(format!(
            "W at {} is not non-increasing: {:?}",
            eig, parts
        )));
    }
    Ok(Partition::new(parts))
}
