//! Constructing explicit pencils: canonical block realizations of a
//! structure, deterministic strict-equivalence scrambling, and the coupled
//! sequences that witness eigenvalue coalescence in a bundle closure.

use std::collections::BTreeSet;

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{ExactMatrix, ExplicitPencil, GaussianRational};
use crate::partitions::Partition;
use crate::structure::{Eigenvalue, PencilStructure};
use crate::{Error, Result};

/// `λI_k + J_k(μ)`: Jordan pencil at a finite eigenvalue.
fn jordan_finite(k: usize, mu: &GaussianRational) -> ExplicitPencil {
    let mut a = ExactMatrix::zero(k, k);
    for i in 0..k {
        a.set(i, i, -mu);
        if i + 1 < k {
            a.set(i, i + 1, GaussianRational::one());
        }
    }
    ExplicitPencil::new(a, ExactMatrix::identity(k))
}

/// `λN_k + I_k`: Jordan pencil at the infinite eigenvalue.
fn jordan_infinite(k: usize) -> ExplicitPencil {
    let mut b = ExactMatrix::zero(k, k);
    for i in 0..k.saturating_sub(1) {
        b.set(i, i + 1, GaussianRational::one());
    }
    ExplicitPencil::new(ExactMatrix::identity(k), b)
}

/// `R_k(λ)`, size `k × (k+1)`; `R_0` is a null column.
fn right_singular(k: usize) -> ExplicitPencil {
    let mut a = ExactMatrix::zero(k, k + 1);
    let mut b = ExactMatrix::zero(k, k + 1);
    for i in 0..k {
        b.set(i, i, GaussianRational::one());
        a.set(i, i + 1, GaussianRational::one());
    }
    ExplicitPencil::new(a, b)
}

/// `R_k(λ)ᵀ`, size `(k+1) × k`; `R_0ᵀ` is a null row.
fn left_singular(k: usize) -> ExplicitPencil {
    let r = right_singular(k);
    ExplicitPencil::new(r.a().transpose(), r.b().transpose())
}

/// Realizes a structure as the block-diagonal pencil of its canonical
/// blocks, in canonical serialization order (eigenvalues sorted, Jordan
/// blocks per eigenvalue by size descending, then right and left singular
/// blocks by index descending).
///
/// Symbolic eigenvalues have no concrete value and are rejected.
pub fn realize_kcf(s: &PencilStructure) -> Result<ExplicitPencil> {
    let mut blocks: Vec<ExplicitPencil> = Vec::new();
    for e in s.eigenvalues() {
        let segre = s.segre_at(e);
        for &size in segre.parts() {
            blocks.push(match e {
                Eigenvalue::Finite(mu) => jordan_finite(size, mu),
                Eigenvalue::Infinity => jordan_infinite(size),
                Eigenvalue::Symbolic(label) => {
                    return Err(Error::SymbolicEigenvalue(label.clone()))
                }
            });
        }
    }
    for &k in s.right_indices() {
        blocks.push(right_singular(k));
    }
    for &k in s.left_indices() {
        blocks.push(left_singular(k));
    }
    let sum = ExplicitPencil::direct_sum(&blocks);
    debug_assert_eq!((sum.rows(), sum.cols()), (s.rows(), s.cols()));
    Ok(sum)
}

/// A product of unit lower and upper triangular matrices with small integer
/// entries: exactly invertible (determinant 1) and cheap to generate.
fn random_unimodular(rng: &mut ChaCha8Rng, size: usize) -> ExactMatrix {
    let mut out = ExactMatrix::identity(size);
    for _ in 0..2 {
        for lower in [true, false] {
            let mut factor = ExactMatrix::identity(size);
            for i in 0..size {
                for j in 0..size {
                    let fill = if lower { i > j } else { i < j };
                    if fill {
                        let v: i64 = rng.gen_range(-2..=2);
                        factor.set(i, j, GaussianRational::from_int(v));
                    }
                }
            }
            out = out.mul(&factor);
        }
    }
    out
}

/// Applies a deterministic pseudo-random strict equivalence
/// `(A, B) ↦ (PAQ, PBQ)` with unimodular integer `P`, `Q` derived from
/// `seed`. Every structural invariant of the pencil is preserved.
pub fn scramble(pencil: &ExplicitPencil, seed: u64) -> ExplicitPencil {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_unimodular(&mut rng, pencil.rows());
    let q = random_unimodular(&mut rng, pencil.cols());
    ExplicitPencil::new(p.mul(pencil.a()).mul(&q), p.mul(pencil.b()).mul(&q))
}

/// Placement of the superdiagonal coupling ones in an `E` matrix: an
/// `m × m` frame with chosen positions `i` (1-based, `1 ≤ i < m`) marking
/// an entry 1 at `(i, i+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingSpec {
    size: usize,
    positions: BTreeSet<usize>,
}

impl CouplingSpec {
    /// Panics unless every position lies strictly inside the band
    /// (`1 ≤ i < size`).
    pub fn new(size: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let positions: BTreeSet<usize> = positions.into_iter().collect();
        assert!(
            positions.iter().all(|&i| i >= 1 && i < size),
            "coupling positions must satisfy 1 <= i < size"
        );
        CouplingSpec { size, positions }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn positions(&self) -> &BTreeSet<usize> {
        &self.positions
    }
}

/// The matrix `E_m(i_1, …, i_t)`: ones exactly at `(i, i+1)` for the chosen
/// 1-based positions, zeros elsewhere.
pub fn build_e(spec: &CouplingSpec) -> ExactMatrix {
    let mut e = ExactMatrix::zero(spec.size(), spec.size());
    for &i in spec.positions() {
        e.set(i - 1, i, GaussianRational::one());
    }
    e
}

/// One step of a coalescence witness: the pencil `L_k` together with its
/// entrywise limit.
pub struct WitnessSequence {
    /// Member `k` of the sequence; strictly equivalent to the original
    /// structure with the group eigenvalues displaced to `target + i/k`.
    pub lk: ExplicitPencil,
    /// The `k → ∞` limit: the group coalesced at `target` (Segre summed
    /// layerwise), everything else untouched. Independent of `k`.
    pub limit: ExplicitPencil,
    /// Group eigenvalues in construction order, paired with their
    /// displaced values `target + i/k`, `i = 1, 2, …`.
    pub displaced: Vec<(Eigenvalue, GaussianRational)>,
}

/// Builds the explicit pencil sequence showing that coalescing `group` at
/// `target` stays inside the bundle closure of `s`.
///
/// The group eigenvalues are ordered by descending number of Jordan blocks
/// (ties: ascending total multiplicity, then canonical order). Layer `j`
/// direct-sums the `j`-th largest block of every still-participating
/// eigenvalue and couples consecutive blocks with an `E` matrix at the
/// cumulative size boundaries, so the limit of layer `j` is a single Jordan
/// block of the summed size: the limit Segre at `target` is the layerwise
/// sum (equivalently, the limit Weyr is the union).
pub fn witness_sequence(
    s: &PencilStructure,
    group: &BTreeSet<Eigenvalue>,
    target: &GaussianRational,
    k: usize,
) -> Result<WitnessSequence> {
    assert!(k >= 1, "k must be positive");
    if group.is_empty() {
        return Err(Error::IncompleteAssignment(
            "empty coalescence group".into(),
        ));
    }
    let spectrum: BTreeSet<Eigenvalue> = s.eigenvalues().cloned().collect();
    for e in group {
        if !spectrum.contains(e) {
            return Err(Error::UnknownEigenvalue(e.to_string()));
        }
        match e {
            Eigenvalue::Finite(_) => {}
            Eigenvalue::Infinity => {
                return Err(Error::InfiniteEigenvalue(
                    "coalescence groups must be finite eigenvalues".into(),
                ))
            }
            Eigenvalue::Symbolic(label) => return Err(Error::SymbolicEigenvalue(label.clone())),
        }
    }

    let untouched: Vec<&Eigenvalue> = spectrum.iter().filter(|e| !group.contains(e)).collect();
    let target_eig = Eigenvalue::Finite(target.clone());
    if untouched.iter().any(|e| **e == target_eig) {
        return Err(Error::EigenvalueCollision(format!(
            "target {} is an untouched eigenvalue",
            target
        )));
    }

    // construction order: g descending, then lighter Segre first
    let mut ordered: Vec<(Eigenvalue, Partition)> =
        group.iter().map(|e| (e.clone(), s.segre_at(e))).collect();
    ordered.sort_by(|(ea, pa), (eb, pb)| {
        pb.len()
            .cmp(&pa.len())
            .then_with(|| pa.weight().cmp(&pb.weight()))
            .then_with(|| ea.cmp(eb))
    });

    let displaced: Vec<(Eigenvalue, GaussianRational)> = ordered
        .iter()
        .enumerate()
        .map(|(idx, (e, _))| {
            let shift = GaussianRational::from_real(BigRational::new(
                BigInt::from(idx as i64 + 1),
                BigInt::from(k as i64),
            ));
            (e.clone(), target + &shift)
        })
        .collect();
    for (_, value) in &displaced {
        if untouched
            .iter()
            .any(|e| **e == Eigenvalue::Finite(value.clone()))
        {
            return Err(Error::EigenvalueCollision(format!(
                "displaced eigenvalue {} collides with an untouched one",
                value
            )));
        }
    }

    let layer = |values: &dyn Fn(usize) -> GaussianRational| -> Vec<ExplicitPencil> {
        let g_max = ordered.iter().map(|(_, p)| p.len()).max().unwrap_or(0);
        let mut layers = Vec::with_capacity(g_max);
        for j in 0..g_max {
            let sizes: Vec<usize> = ordered
                .iter()
                .filter(|(_, p)| p.len() > j)
                .map(|(_, p)| p.part(j))
                .collect();
            let blocks: Vec<ExplicitPencil> = sizes
                .iter()
                .enumerate()
                .map(|(idx, &size)| jordan_finite(size, &values(idx)))
                .collect();
            let mut joined = ExplicitPencil::direct_sum(&blocks);
            let boundaries: Vec<usize> = sizes[..sizes.len() - 1]
                .iter()
                .scan(0, |acc, &s| {
                    *acc += s;
                    Some(*acc)
                })
                .collect();
            let coupling = build_e(&CouplingSpec::new(joined.rows(), boundaries));
            joined = ExplicitPencil::new(joined.a().add(&coupling), joined.b().clone());
            layers.push(joined);
        }
        layers
    };

    let displaced_values: Vec<GaussianRational> =
        displaced.iter().map(|(_, v)| v.clone()).collect();
    let lk_layers = layer(&|idx| displaced_values[idx].clone());
    let limit_layers = layer(&|_| target.clone());

    let rest_weight: usize = ordered.iter().map(|(_, p)| p.weight()).sum();
    let rest = PencilStructure::new(
        s.rows() - rest_weight,
        s.cols() - rest_weight,
        untouched
            .iter()
            .map(|e| ((*e).clone(), s.segre_at(e)))
            .collect(),
        s.right_indices().to_vec(),
        s.left_indices().to_vec(),
    )?;
    let rest = realize_kcf(&rest)?;

    let assemble = |layers: Vec<ExplicitPencil>| {
        let mut blocks: Vec<&ExplicitPencil> = layers.iter().collect();
        blocks.push(&rest);
        ExplicitPencil::direct_sum(blocks)
    };
    Ok(WitnessSequence {
        lk: assemble(lk_layers),
        limit: assemble(limit_layers),
        displaced,
    })
}
