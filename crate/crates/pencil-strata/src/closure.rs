//! The decision procedures: eigenvalue coalescence, orbit-closure
//! inclusion, bundle-closure inclusion with witness search, and the
//! matrix-similarity wrapper.
//!
//! Orbit inclusion is a finite list of majorizations between Weyr data of
//! the two operands. Bundle inclusion quantifies the eigenvalue values
//! away: it holds iff the would-be contained pencil lies in the orbit
//! closure of *some* coalescence of the container, so the test searches
//! the finite space of coalescence assignments.

use std::collections::BTreeMap;
use std::fmt;

use crate::partitions::Partition;
use crate::structure::{BundleSignature, Eigenvalue, PencilStructure};
use crate::{Error, Result};

/// Destination of one source eigenvalue under a coalescence map.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CoalesceTarget {
    /// Sent to this concrete value; sources sharing a value coalesce.
    To(Eigenvalue),
    /// Sent to its own new value, distinct from everything else.
    Fresh,
}

/// A coalescence map restricted to the spectrum of a source structure:
/// every source eigenvalue is assigned a [`CoalesceTarget`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoalescenceAssignment {
    map: BTreeMap<Eigenvalue, CoalesceTarget>,
}

impl CoalescenceAssignment {
    pub fn new(map: BTreeMap<Eigenvalue, CoalesceTarget>) -> Self {
        CoalescenceAssignment { map }
    }

    /// The assignment keeping every eigenvalue of `s` where it is.
    pub fn identity(s: &PencilStructure) -> Self {
        CoalescenceAssignment {
            map: s
                .eigenvalues()
                .map(|e| (e.clone(), CoalesceTarget::To(e.clone())))
                .collect(),
        }
    }

    pub fn get(&self, e: &Eigenvalue) -> Option<&CoalesceTarget> {
        self.map.get(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Eigenvalue, &CoalesceTarget)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

impl fmt::Display for CoalescenceAssignment {
    /// Class form `{a,b}->t; {c}->fresh`, classes sorted by target.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut classes: BTreeMap<&CoalesceTarget, Vec<&Eigenvalue>> = BTreeMap::new();
        for (e, t) in &self.map {
            classes.entry(t).or_default().push(e);
        }
        let mut first = true;
        let mut write_class =
            |f: &mut fmt::Formatter<'_>, members: &[&Eigenvalue], target: String| -> fmt::Result {
                if !first {
                    write!(f, "; ")?;
                }
                first = false;
                let names: Vec<String> = members.iter().map(|e| e.to_string()).collect();
                write!(f, "{{{}}}->{}", names.join(","), target)
            };
        for (target, members) in &classes {
            match target {
                CoalesceTarget::To(value) => write_class(f, members, value.to_string())?,
                CoalesceTarget::Fresh => {
                    // each fresh-bound eigenvalue is its own class
                    for e in members {
                        write_class(f, &[e], "fresh".to_string())?;
                    }
                }
            }
        }
        if first {
            write!(f, "{{}}")?;
        }
        Ok(())
    }
}

/// Applies a coalescence map: the result keeps the size and the singular
/// data of `s`, and at every destination value carries the Segre sum
/// (equivalently the Weyr union) of its preimage.
///
/// `Fresh` destinations take their concrete new value from `fresh_names`.
/// Distinct classes must land on distinct values; in particular a fresh
/// value may not collide with any other destination.
pub fn coalesce(
    s: &PencilStructure,
    assignment: &CoalescenceAssignment,
    fresh_names: &BTreeMap<Eigenvalue, Eigenvalue>,
) -> Result<PencilStructure> {
    for e in assignment.map.keys() {
        if s.segre_at(e).is_empty() {
            return Err(Error::UnknownEigenvalue(e.to_string()));
        }
    }
    let mut destinations: BTreeMap<Eigenvalue, Vec<Partition>> = BTreeMap::new();
    let mut fresh_values: Vec<Eigenvalue> = Vec::new();
    for e in s.eigenvalues() {
        let Some(target) = assignment.get(e) else {
            return Err(Error::IncompleteAssignment(format!("no target for {}", e)));
        };
        let value = match target {
            CoalesceTarget::To(v) => v.clone(),
            CoalesceTarget::Fresh => {
                let Some(v) = fresh_names.get(e) else {
                    return Err(Error::IncompleteAssignment(format!(
                        "no fresh name for {}",
                        e
                    )));
                };
                fresh_values.push(v.clone());
                v.clone()
            }
        };
        destinations.entry(value).or_default().push(s.segre_at(e));
    }
    // a fresh value is a class of its own: any other use of it collides
    for v in &fresh_values {
        if destinations.get(v).is_some_and(|c| c.len() > 1)
            || fresh_values.iter().filter(|w| *w == v).count() > 1
        {
            return Err(Error::TargetCollision(v.to_string()));
        }
    }
    let eig: BTreeMap<Eigenvalue, Partition> = destinations
        .into_iter()
        .map(|(v, parts)| (v, Partition::sum(&parts)))
        .collect();
    PencilStructure::new(
        s.rows(),
        s.cols(),
        eig,
        s.right_indices().to_vec(),
        s.left_indices().to_vec(),
    )
}

/// Symbolic fresh names `@f1, @f2, …` for the `Fresh` entries of an
/// assignment, skipping labels already in use by `s` or the assignment.
pub fn auto_fresh_names(
    s: &PencilStructure,
    assignment: &CoalescenceAssignment,
) -> BTreeMap<Eigenvalue, Eigenvalue> {
    let mut taken: Vec<Eigenvalue> = s.eigenvalues().cloned().collect();
    for (_, t) in assignment.iter() {
        if let CoalesceTarget::To(v) = t {
            taken.push(v.clone());
        }
    }
    let mut names = BTreeMap::new();
    let mut next = 1usize;
    for (e, t) in assignment.iter() {
        if *t != CoalesceTarget::Fresh {
            continue;
        }
        let mut candidate = Eigenvalue::symbolic(format!("f{}", next));
        while taken.contains(&candidate) {
            next += 1;
            candidate = Eigenvalue::symbolic(format!("f{}", next));
        }
        taken.push(candidate.clone());
        names.insert(e.clone(), candidate);
        next += 1;
    }
    names
}

/// Every coalescence pattern on the spectrum of `s`: each eigenvalue maps
/// to an existing eigenvalue value or into one of up to `|Λ(s)|` shared
/// new classes (materialized as `@w1, @w2, …`). Covers all partitions of
/// the spectrum combined with all target choices, up to renaming of the
/// new values.
pub fn all_assignments(s: &PencilStructure) -> Vec<CoalescenceAssignment> {
    let sources: Vec<Eigenvalue> = s.eigenvalues().cloned().collect();
    let n = sources.len();
    let mut fresh_pool: Vec<Eigenvalue> = Vec::new();
    let mut label = 1usize;
    while fresh_pool.len() < n {
        let candidate = Eigenvalue::symbolic(format!("w{}", label));
        if !sources.contains(&candidate) {
            fresh_pool.push(candidate);
        }
        label += 1;
    }
    let choices = n + n; // existing values, then shared fresh classes
    let total = choices.pow(n as u32);
    let mut out = Vec::with_capacity(total.max(1));
    for index in 0..total.max(usize::from(n == 0)) {
        let mut digits = index;
        let mut map = BTreeMap::new();
        for source in &sources {
            let choice = digits % choices;
            digits /= choices;
            let value = if choice < n {
                sources[choice].clone()
            } else {
                fresh_pool[choice - n].clone()
            };
            map.insert(source.clone(), CoalesceTarget::To(value));
        }
        out.push(CoalescenceAssignment::new(map));
    }
    out
}

/// Outcome of the orbit-closure test with the per-condition detail the
/// CLI reports.
#[derive(Clone, Debug)]
pub struct OrbitReport {
    /// Rank drop `rank(L) − rank(M)`.
    pub h: i64,
    /// Condition (i): right singular data of `M` against `L`.
    pub right_ok: bool,
    /// Condition (ii): left singular data.
    pub left_ok: bool,
    /// Condition (iii) per eigenvalue of either operand, canonical order.
    pub eigen: Vec<(Eigenvalue, bool)>,
    /// Condition (iii) at every remaining point of the sphere (`h ≥ 0`).
    pub generic_ok: bool,
}

impl OrbitReport {
    pub fn contains(&self) -> bool {
        self.right_ok && self.left_ok && self.generic_ok && self.eigen.iter().all(|(_, ok)| *ok)
    }
}

/// Decides `M ∈ closure(O(L))` and reports each dominance condition.
///
/// With `h = rank(L) − rank(M)`, containment holds iff
/// `r(M) ≺ r(L)+(h,…)`, `ℓ(M) ≺ ℓ(L)+(h,…)`, and
/// `W(μ,L) ≺ W(μ,M)+(h,…)` for every `μ` of the sphere; only points in
/// `Λ(L) ∪ Λ(M)` give conditions beyond `h ≥ 0`.
///
/// Eigenvalue values are material here, so symbolic eigenvalues are
/// rejected; both operands must have the same size.
pub fn orbit_closure_report(l: &PencilStructure, m: &PencilStructure) -> Result<OrbitReport> {
    if (l.rows(), l.cols()) != (m.rows(), m.cols()) {
        return Err(Error::SizeMismatch(l.rows(), l.cols(), m.rows(), m.cols()));
    }
    for e in l.eigenvalues().chain(m.eigenvalues()) {
        if let Eigenvalue::Symbolic(label) = e {
            return Err(Error::SymbolicEigenvalue(label.clone()));
        }
    }
    let h = l.rank() as i64 - m.rank() as i64;
    let mut points: Vec<Eigenvalue> = l.eigenvalues().chain(m.eigenvalues()).cloned().collect();
    points.sort();
    points.dedup();
    let eigen = points
        .into_iter()
        .map(|e| {
            let ok = l.weyr_at(&e).majorizes_with_offset(&m.weyr_at(&e), h);
            (e, ok)
        })
        .collect();
    Ok(OrbitReport {
        h,
        right_ok: m.right_weyr().majorizes_with_offset(&l.right_weyr(), h),
        left_ok: m.left_weyr().majorizes_with_offset(&l.left_weyr(), h),
        eigen,
        generic_ok: Partition::empty().majorizes_with_offset(&Partition::empty(), h),
    })
}

/// Decides `M ∈ closure(O(L))`. See [`orbit_closure_report`].
pub fn orbit_closure_contains(l: &PencilStructure, m: &PencilStructure) -> Result<bool> {
    Ok(orbit_closure_report(l, m)?.contains())
}

/// Decides `closure(B(M)) ⊆ closure(B(L))`, returning the first
/// coalescence witness in a deterministic enumeration order when the
/// inclusion holds.
///
/// The inclusion holds iff `M` lies in the orbit closure of some
/// coalescence of `L`, so the search ranges over assignments of each
/// eigenvalue of `L` to an eigenvalue of `M` or to a fresh value off the
/// spectrum of `M`. Fresh-bound eigenvalues get one class each: merging
/// two fresh classes only unions their Weyr data, which weakly increases
/// every prefix sum of the left side of the dominance test against the
/// fixed right side `(h, h, …)`, so separate classes are the best case
/// and nothing is lost.
///
/// Symbolic eigenvalues are fine here; only the pattern of equalities
/// matters, never the values.
pub fn bundle_closure_contains(
    l: &PencilStructure,
    m: &PencilStructure,
) -> Result<(bool, Option<CoalescenceAssignment>)> {
    if (l.rows(), l.cols()) != (m.rows(), m.cols()) {
        return Err(Error::SizeMismatch(l.rows(), l.cols(), m.rows(), m.cols()));
    }
    let h = l.rank() as i64 - m.rank() as i64;

    // assignment-independent conditions
    let generic_ok = Partition::empty().majorizes_with_offset(&Partition::empty(), h);
    let right_ok = m.right_weyr().majorizes_with_offset(&l.right_weyr(), h);
    let left_ok = m.left_weyr().majorizes_with_offset(&l.left_weyr(), h);
    if !(generic_ok && right_ok && left_ok) {
        return Ok((false, None));
    }

    let sources: Vec<(Eigenvalue, Partition)> =
        l.eigenvalues().map(|e| (e.clone(), l.weyr_at(e))).collect();
    let targets: Vec<(Eigenvalue, Partition)> =
        m.eigenvalues().map(|e| (e.clone(), m.weyr_at(e))).collect();
    let s = sources.len();
    let t = targets.len();
    let choices = t + 1; // target index, or fresh

    let feasible = |digits: &[usize]| -> bool {
        // fresh classes: one eigenvalue alone against the bare offset
        for (digit, (_, weyr)) in digits.iter().zip(&sources) {
            if *digit == t && !weyr.majorizes_with_offset(&Partition::empty(), h) {
                return false;
            }
        }
        // coalesced classes against each target eigenvalue
        for (j, (_, target_weyr)) in targets.iter().enumerate() {
            let members: Vec<&Partition> = digits
                .iter()
                .zip(&sources)
                .filter_map(|(d, (_, w))| (*d == j).then_some(w))
                .collect();
            let union = Partition::union(members);
            if !union.majorizes_with_offset(target_weyr, h) {
                return false;
            }
        }
        true
    };

    const SEARCH_BOUND: usize = 10_000_000;
    let total = choices
        .checked_pow(s as u32)
        .filter(|&total| total <= SEARCH_BOUND)
        .ok_or_else(|| Error::SearchTooLarge(format!("{choices}^{s} coalescence assignments")))?;
    let mut digits = vec![0usize; s];
    for index in 0..total {
        // digits of `index` in base `choices`, first source most significant
        let mut rest = index;
        for d in digits.iter_mut().rev() {
            *d = rest % choices;
            rest /= choices;
        }
        if feasible(&digits) {
            let map = digits
                .iter()
                .zip(&sources)
                .map(|(d, (e, _))| {
                    let target = if *d == t {
                        CoalesceTarget::Fresh
                    } else {
                        CoalesceTarget::To(targets[*d].0.clone())
                    };
                    (e.clone(), target)
                })
                .collect();
            return Ok((true, Some(CoalescenceAssignment::new(map))));
        }
    }
    Ok((false, None))
}

/// Signature-level bundle inclusion: anonymous eigenvalues are
/// instantiated with placeholder labels and the structural test applied.
pub fn bundle_closure_contains_sig(l: &BundleSignature, m: &BundleSignature) -> Result<bool> {
    Ok(bundle_closure_contains(&l.instantiate_symbolic(), &m.instantiate_symbolic())?.0)
}

fn require_matrix_like(s: &PencilStructure) -> Result<()> {
    let n = s.cols();
    if s.rows() != n {
        return Err(Error::NotMatrixLike(format!(
            "not square: {}x{}",
            s.rows(),
            n
        )));
    }
    if !s.right_indices().is_empty() || !s.left_indices().is_empty() {
        return Err(Error::NotMatrixLike("singular blocks present".into()));
    }
    if s.eigenvalues().any(|e| *e == Eigenvalue::Infinity) {
        return Err(Error::NotMatrixLike("infinite eigenvalue present".into()));
    }
    let weight: usize = s.eigenvalues().map(|e| s.segre_at(e).weight()).sum();
    if weight != n {
        return Err(Error::NotMatrixLike(format!(
            "total multiplicity {} != {}",
            weight, n
        )));
    }
    Ok(())
}

/// Bundle-closure inclusion for matrices under similarity, through their
/// pencil encodings `λI − A`. Both structures must be square, regular,
/// finite-spectrum, and of full multiplicity; the rank drop is then zero
/// and the singular conditions are vacuous.
pub fn matrix_bundle_contains(a: &PencilStructure, b: &PencilStructure) -> Result<bool> {
    require_matrix_like(a)?;
    require_matrix_like(b)?;
    Ok(bundle_closure_contains(a, b)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn structure(text: &str) -> PencilStructure {
        PencilStructure::parse(text).unwrap()
    }

    fn no_fresh() -> BTreeMap<Eigenvalue, Eigenvalue> {
        BTreeMap::new()
    }

    fn to(v: &str) -> CoalesceTarget {
        CoalesceTarget::To(Eigenvalue::parse(v).unwrap())
    }

    fn assignment(pairs: &[(&str, CoalesceTarget)]) -> CoalescenceAssignment {
        CoalescenceAssignment::new(
            pairs
                .iter()
                .map(|(e, t)| (Eigenvalue::parse(e).unwrap(), t.clone()))
                .collect(),
        )
    }

    #[test]
    fn coalesce_worked_example_all_to_one() {
        let s = structure("21x22: J(0;2,2,1) J(1;3,2) J(2;4) R(3) R(1) LT(2)");
        let a = assignment(&[("0", to("1")), ("1", to("1")), ("2", to("1"))]);
        let c = coalesce(&s, &a, &no_fresh()).unwrap();
        assert_eq!(
            c.weyr_at(&Eigenvalue::from_int(1)),
            Partition::from([3, 2, 2, 2, 1, 1, 1, 1, 1])
        );
        assert_eq!(c.right_indices(), s.right_indices());
        assert_eq!(c.left_indices(), s.left_indices());
        assert_eq!((c.rows(), c.cols()), (s.rows(), s.cols()));
        assert_eq!(c.eigenvalue_count(), 1);
    }

    #[test]
    fn coalesce_worked_example_two_groups() {
        let s = structure("21x22: J(0;2,2,1) J(1;3,2) J(2;4) R(3) R(1) LT(2)");
        let a = assignment(&[("0", to("1")), ("2", to("1")), ("1", to("5"))]);
        let c = coalesce(&s, &a, &no_fresh()).unwrap();
        assert_eq!(
            c.weyr_at(&Eigenvalue::from_int(1)),
            Partition::from([3, 2, 1, 1, 1, 1])
        );
        assert_eq!(
            c.weyr_at(&Eigenvalue::from_int(5)),
            Partition::from([2, 2, 1])
        );
    }

    #[test]
    fn coalesce_identity_is_identity() {
        let s = structure("21x22: J(0;2,2,1) J(1;3,2) J(2;4) R(3) R(1) LT(2)");
        let a = CoalescenceAssignment::identity(&s);
        assert_eq!(coalesce(&s, &a, &no_fresh()).unwrap(), s);
    }

    #[test]
    fn coalesce_pervouchine_sum() {
        let s = structure("3x3: J(2;2) J(3;1)");
        let a = assignment(&[("2", to("2")), ("3", to("2"))]);
        let c = coalesce(&s, &a, &no_fresh()).unwrap();
        assert_eq!(c, structure("3x3: J(2;3)"));
    }

    #[test]
    fn coalesce_fresh_naming_and_collisions() {
        let s = structure("3x3: J(2;2) J(3;1)");
        let a = assignment(&[("2", to("2")), ("3", CoalesceTarget::Fresh)]);
        assert!(matches!(
            coalesce(&s, &a, &no_fresh()),
            Err(Error::IncompleteAssignment(_))
        ));
        let names = auto_fresh_names(&s, &a);
        let c = coalesce(&s, &a, &names).unwrap();
        assert_eq!(c.weyr_at(&Eigenvalue::symbolic("f1")), Partition::from([1]));

        // a fresh name colliding with another class is rejected
        let bad: BTreeMap<Eigenvalue, Eigenvalue> =
            [(Eigenvalue::from_int(3), Eigenvalue::from_int(2))].into();
        assert!(matches!(
            coalesce(&s, &a, &bad),
            Err(Error::TargetCollision(_))
        ));

        // partial assignments are rejected
        let partial = assignment(&[("2", to("2"))]);
        assert!(matches!(
            coalesce(&s, &partial, &no_fresh()),
            Err(Error::IncompleteAssignment(_))
        ));
    }

    #[test]
    fn orbit_examples() {
        let l = structure("3x3: J(2;2,1)");
        let m = structure("3x3: J(2;3)");
        assert!(!orbit_closure_contains(&l, &m).unwrap());
        assert!(orbit_closure_contains(&m, &l).unwrap());
        assert!(orbit_closure_contains(&l, &l).unwrap());

        let r1 = structure("1x2: R(1)");
        let zero = structure("1x2: R(0) R(0) LT(0)");
        assert!(orbit_closure_contains(&r1, &zero).unwrap());
        assert!(!orbit_closure_contains(&zero, &r1).unwrap());
    }

    #[test]
    fn orbit_report_details() {
        let l = structure("3x3: J(2;2,1)");
        let m = structure("3x3: J(2;3)");
        let report = orbit_closure_report(&l, &m).unwrap();
        assert_eq!(report.h, 0);
        assert!(report.right_ok && report.left_ok && report.generic_ok);
        assert_eq!(report.eigen.len(), 1);
        assert!(!report.eigen[0].1);
    }

    #[test]
    fn orbit_rejects_bad_operands() {
        let l = structure("3x3: J(2;3)");
        let wide = structure("3x4: J(2;3) R(0)");
        assert!(matches!(
            orbit_closure_contains(&l, &wide),
            Err(Error::SizeMismatch(..))
        ));
        let sym = structure("3x3: J(@a;3)");
        assert!(matches!(
            orbit_closure_contains(&l, &sym),
            Err(Error::SymbolicEigenvalue(_))
        ));
    }

    #[test]
    fn rank_increase_is_never_contained() {
        // rank(L) = 1 < 2 = rank(M): h < 0 must force a NO
        let l = structure("2x2: J(0;1) R(0) LT(0)");
        let m = structure("2x2: J(0;2)");
        assert!(!orbit_closure_contains(&l, &m).unwrap());
        assert!(!bundle_closure_contains(&l, &m).unwrap().0);
    }

    #[test]
    fn bundle_pervouchine() {
        let l = structure("3x3: J(3;1) J(2;2)");
        let m = structure("3x3: J(2;3)");
        let (yes, witness) = bundle_closure_contains(&l, &m).unwrap();
        assert!(yes);
        assert_eq!(witness.unwrap().to_string(), "{2,3}->2");
        // and in the other direction coalescence cannot split eigenvalues
        assert!(!bundle_closure_contains(&m, &l).unwrap().0);
    }

    #[test]
    fn bundle_same_signature_contains() {
        let l = structure("3x3: J(3;1) J(2;2)");
        let m = structure("3x3: J(0;2) J(7;1)");
        assert!(bundle_closure_contains(&l, &m).unwrap().0);
        assert!(bundle_closure_contains(&m, &l).unwrap().0);
    }

    #[test]
    fn bundle_symbolic_jordan_merge() {
        let l = structure("2x2: J(@a;1) J(@b;1)");
        let m = structure("2x2: J(@c;2)");
        let (yes, witness) = bundle_closure_contains(&l, &m).unwrap();
        assert!(yes);
        assert_eq!(witness.unwrap().to_string(), "{@a,@b}->@c");
    }

    #[test]
    fn bundle_verdict_depends_only_on_signatures() {
        // relabeled operands (including swaps with inf and symbolic
        // labels) must produce identical verdicts
        let variants_l = [
            "3x3: J(3;1) J(2;2)",
            "3x3: J(inf;2) J(0;1)",
            "3x3: J(@p;2) J(@q;1)",
        ];
        let variants_m = ["3x3: J(2;3)", "3x3: J(inf;3)", "3x3: J(@z;3)"];
        for l in variants_l {
            for m in variants_m {
                assert!(
                    bundle_closure_contains(&structure(l), &structure(m))
                        .unwrap()
                        .0
                );
                assert!(
                    !bundle_closure_contains(&structure(m), &structure(l))
                        .unwrap()
                        .0
                );
            }
        }
    }

    #[test]
    fn orbit_containment_implies_bundle_containment() {
        let pairs = [
            ("3x3: J(2;3)", "3x3: J(2;2,1)"),
            ("1x2: R(1)", "1x2: R(0) R(0) LT(0)"),
            ("2x2: J(0;2)", "2x2: J(0;1) R(0) LT(0)"),
        ];
        for (l, m) in pairs {
            let l = structure(l);
            let m = structure(m);
            assert!(orbit_closure_contains(&l, &m).unwrap());
            assert!(bundle_closure_contains(&l, &m).unwrap().0);
        }
    }

    #[test]
    fn bundle_closure_contains_every_coalescence() {
        let s = structure("6x6: J(0;2) J(1;1) J(inf;1) R(1) LT(0)");
        for a in all_assignments(&s) {
            let c = coalesce(&s, &a, &no_fresh()).unwrap();
            assert!(
                bundle_closure_contains(&s, &c).unwrap().0,
                "coalescence by {} escaped the closure",
                a
            );
        }
    }

    #[test]
    fn matrix_examples() {
        let a = structure("3x3: J(@l;2) J(@m;1)");
        let b = structure("3x3: J(@c;3)");
        assert!(matrix_bundle_contains(&a, &b).unwrap());
        assert!(matrix_bundle_contains(&a, &a).unwrap());
        let simple = structure("3x3: J(@x;1) J(@y;1) J(@z;1)");
        assert!(!matrix_bundle_contains(&b, &simple).unwrap());
        assert!(matrix_bundle_contains(&simple, &b).unwrap());

        let singular = structure("3x3: J(0;2) R(0) LT(0)");
        assert!(matches!(
            matrix_bundle_contains(&singular, &b),
            Err(Error::NotMatrixLike(_))
        ));
        let infinite = structure("3x3: J(inf;2) J(0;1)");
        assert!(matches!(
            matrix_bundle_contains(&infinite, &b),
            Err(Error::NotMatrixLike(_))
        ));
    }

    /// Unpruned reference search: fresh-bound eigenvalues may also share
    /// classes. The production search fixes one class per fresh eigenvalue;
    /// both must agree on every verdict.
    fn bundle_contains_unpruned(l: &PencilStructure, m: &PencilStructure) -> bool {
        let h = l.rank() as i64 - m.rank() as i64;
        if !(Partition::empty().majorizes_with_offset(&Partition::empty(), h)
            && m.right_weyr().majorizes_with_offset(&l.right_weyr(), h)
            && m.left_weyr().majorizes_with_offset(&l.left_weyr(), h))
        {
            return false;
        }
        let sources: Vec<Partition> = l.eigenvalues().map(|e| l.weyr_at(e)).collect();
        let targets: Vec<Partition> = m.eigenvalues().map(|e| m.weyr_at(e)).collect();
        let s = sources.len();
        let t = targets.len();
        let choices = t + s; // each target, or any of s shared fresh classes
        let total = choices.pow(s as u32).max(1);
        'outer: for index in 0..total {
            let mut rest = index;
            let mut digits = vec![0usize; s];
            for d in digits.iter_mut() {
                *d = rest % choices.max(1);
                rest /= choices.max(1);
            }
            for class in 0..choices {
                let members: Vec<&Partition> = digits
                    .iter()
                    .zip(&sources)
                    .filter_map(|(d, w)| (*d == class).then_some(w))
                    .collect();
                if members.is_empty() {
                    continue;
                }
                let union = Partition::union(members);
                let against = targets.get(class).cloned().unwrap_or_default();
                if !union.majorizes_with_offset(&against, h) {
                    continue 'outer;
                }
            }
            return true;
        }
        false
    }

    #[test]
    fn pruned_search_matches_unpruned() {
        let cases = [
            "2x2: J(0;1) J(1;1)",
            "2x2: J(0;2)",
            "2x2: J(0;1) R(0) LT(0)",
            "2x3: J(0;1) J(1;1) R(0)",
            "2x3: R(2)",
            "2x3: J(0;2) R(0)",
            "3x3: J(0;1) J(1;1) J(2;1)",
            "3x3: J(2;2) J(3;1)",
            "3x3: J(0;2) R(0) LT(0)",
        ];
        for l in cases {
            for m in cases {
                let l = structure(l);
                let m = structure(m);
                if (l.rows(), l.cols()) != (m.rows(), m.cols()) {
                    continue;
                }
                assert_eq!(
                    bundle_closure_contains(&l, &m).unwrap().0,
                    bundle_contains_unpruned(&l, &m),
                    "pruned and unpruned disagree on {} vs {}",
                    l,
                    m
                );
            }
        }
    }

    #[test]
    fn signature_level_matches_structure_level() {
        let l = structure("3x3: J(3;1) J(2;2)");
        let m = structure("3x3: J(2;3)");
        assert!(bundle_closure_contains_sig(&l.signature(), &m.signature()).unwrap());
        assert!(!bundle_closure_contains_sig(&m.signature(), &l.signature()).unwrap());
    }
}
