//! Integer partitions and the dominance arithmetic built on them.
//!
//! Partitions are the lingua franca of Kronecker structures: Segre and Weyr
//! characteristics of an eigenvalue, and the block-count lists of the right
//! and left singular structure, are all non-increasing integer lists. Every
//! closure test in this crate reduces to the four operations defined here:
//! conjugation, multiset union, pointwise sum, and majorization against a
//! constant offset.

use std::fmt;

/// A non-increasing list of positive integers.
///
/// Conceptually every partition continues with infinitely many zeros; the
/// stored form strips them, so equality of values is equality of structures.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from arbitrary non-negative parts: zeros are
    /// dropped and the rest sorted non-increasingly.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// The empty partition.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of all parts.
    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// The `i`-th part (0-based), reading the implicit zero tail.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// The conjugate partition: its `i`-th element (1-based) counts the
    /// parts of `self` that are `≥ i`. Transposes the Young diagram, so it
    /// is an involution and preserves the weight.
    pub fn conjugate(&self) -> Partition {
        let rows = self.part(0);
        let mut parts = Vec::with_capacity(rows);
        for i in 1..=rows {
            parts.push(self.parts.iter().take_while(|&&p| p >= i).count());
        }
        Partition { parts }
    }

    /// Multiset union: all parts of all operands rearranged non-increasingly.
    pub fn union<'a>(ps: impl IntoIterator<Item = &'a Partition>) -> Partition {
        let mut parts: Vec<usize> = ps
            .into_iter()
            .flat_map(|p| p.parts.iter().copied())
            .collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// Pointwise sum, padding shorter operands with zeros. Dual to [`union`]
    /// under conjugation; the weight is additive.
    ///
    /// [`union`]: Partition::union
    pub fn sum<'a>(ps: impl IntoIterator<Item = &'a Partition>) -> Partition {
        let mut parts: Vec<usize> = Vec::new();
        for p in ps {
            if p.len() > parts.len() {
                parts.resize(p.len(), 0);
            }
            for (i, &x) in p.parts.iter().enumerate() {
                parts[i] += x;
            }
        }
        // pointwise sums of non-increasing lists are non-increasing
        Partition { parts }
    }

    /// Decides `self ≺ other + (h, h, …)` over the full infinite lists:
    /// for every `j ≥ 1`, `Σ_{i≤j} self_i ≤ Σ_{i≤j} other_i + j·h`.
    ///
    /// For `h ≥ 0` the right side is non-decreasing in `j` while the left
    /// side freezes after `len(self)` entries, so checking `j ≤ len(self)`
    /// decides the whole family. For `h < 0` the right side eventually
    /// decreases without bound while the left side stays ≥ 0, so some `j`
    /// always violates the inequality and the relation is false outright.
    pub fn majorizes_with_offset(&self, other: &Partition, h: i64) -> bool {
        if h < 0 {
            return false;
        }
        let mut lhs: i64 = 0;
        let mut rhs: i64 = 0;
        for (j, &p) in self.parts.iter().enumerate() {
            lhs += p as i64;
            rhs += other.part(j) as i64 + h;
            if lhs > rhs {
                return false;
            }
        }
        true
    }
}

impl From<&[usize]> for Partition {
    fn from(parts: &[usize]) -> Self {
        Partition::new(parts.to_vec())
    }
}

impl<const N: usize> From<[usize; N]> for Partition {
    fn from(parts: [usize; N]) -> Self {
        Partition::new(parts.to_vec())
    }
}

impl fmt::Display for Partition {
    /// Renders as `(a,b,c)`, with `()` for the empty partition.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    /// Reference decision for `p ≺ q + (h,h,…)` by brute force over a prefix
    /// long enough that both sides have stabilized into straight lines.
    fn majorizes_oracle(a: &Partition, b: &Partition, h: i64) -> bool {
        let horizon = a.len() + b.len() + a.weight() + b.weight() + h.unsigned_abs() as usize + 2;
        let mut lhs: i64 = 0;
        let mut rhs: i64 = 0;
        for j in 0..horizon.max(1) {
            lhs += a.part(j) as i64;
            rhs += b.part(j) as i64 + h;
            if lhs > rhs {
                return false;
            }
        }
        true
    }

    #[test]
    fn normalizes_on_construction() {
        assert_eq!(p(&[0, 2, 1, 2, 0]).parts(), &[2, 2, 1]);
        assert_eq!(p(&[]).parts(), &[] as &[usize]);
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p(&[2, 2, 1]).conjugate(), p(&[3, 2]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(p(&[5, 1]).conjugate(), p(&[2, 1, 1, 1, 1]));
        assert_eq!(p(&[1, 1, 1, 1]).conjugate(), p(&[4]));
    }

    #[test]
    fn union_examples() {
        assert_eq!(
            Partition::union([&p(&[5, 2]), &p(&[6, 3, 3, 2, 1])]),
            p(&[6, 5, 3, 3, 2, 2, 1])
        );
        assert_eq!(
            Partition::union([&p(&[3, 2]), &p(&[2, 2, 1]), &p(&[1, 1, 1, 1])]),
            p(&[3, 2, 2, 2, 1, 1, 1, 1, 1])
        );
        let q = p(&[4, 1]);
        assert_eq!(Partition::union([&q, &Partition::empty()]), q);
    }

    #[test]
    fn sum_examples() {
        assert_eq!(Partition::sum([&p(&[2]), &p(&[1])]), p(&[3]));
        assert_eq!(Partition::sum([&p(&[3, 2]), &p(&[2, 2, 1])]), p(&[5, 4, 1]));
        let q = p(&[4, 1]);
        assert_eq!(Partition::sum([&q]), q);
    }

    #[test]
    fn majorization_examples() {
        assert!(!p(&[2, 1]).majorizes_with_offset(&p(&[1, 1, 1]), 0));
        let q = p(&[3, 1]);
        assert!(q.majorizes_with_offset(&q, 0));
        assert!(p(&[1, 1, 1]).majorizes_with_offset(&p(&[2, 1]), 0));
        assert!(p(&[1]).majorizes_with_offset(&Partition::empty(), 1));
    }

    #[test]
    fn negative_offset_always_fails() {
        // the right side drifts to −∞ past the explicit entries
        assert!(!Partition::empty().majorizes_with_offset(&Partition::empty(), -1));
        assert!(!Partition::empty().majorizes_with_offset(&p(&[5]), -1));
        assert!(!p(&[1]).majorizes_with_offset(&p(&[3, 3]), -2));
    }

    #[test]
    fn empty_against_offset() {
        assert!(Partition::empty().majorizes_with_offset(&Partition::empty(), 0));
        assert!(Partition::empty().majorizes_with_offset(&p(&[2]), 0));
    }

    fn partition_strategy(max_parts: usize, max_part: usize) -> impl Strategy<Value = Partition> {
        prop::collection::vec(0..=max_part, 0..=max_parts).prop_map(Partition::new)
    }

    proptest! {
        #[test]
        fn conjugate_is_involution(a in partition_strategy(8, 9)) {
            prop_assert_eq!(a.conjugate().conjugate(), a.clone());
            prop_assert_eq!(a.conjugate().weight(), a.weight());
        }

        #[test]
        fn conjugation_swaps_union_and_sum(
            ps in prop::collection::vec(partition_strategy(6, 8), 0..5)
        ) {
            let conjs: Vec<Partition> = ps.iter().map(Partition::conjugate).collect();
            prop_assert_eq!(Partition::union(&ps).conjugate(), Partition::sum(&conjs));
            prop_assert_eq!(Partition::sum(&ps).conjugate(), Partition::union(&conjs));
        }

        #[test]
        fn union_and_sum_commute(a in partition_strategy(6, 8), b in partition_strategy(6, 8)) {
            prop_assert_eq!(Partition::union([&a, &b]), Partition::union([&b, &a]));
            prop_assert_eq!(Partition::sum([&a, &b]), Partition::sum([&b, &a]));
        }

        #[test]
        fn union_and_sum_associate(
            a in partition_strategy(5, 6),
            b in partition_strategy(5, 6),
            c in partition_strategy(5, 6),
        ) {
            let ab = Partition::union([&a, &b]);
            let bc = Partition::union([&b, &c]);
            prop_assert_eq!(Partition::union([&ab, &c]), Partition::union([&a, &bc]));
            let ab = Partition::sum([&a, &b]);
            let bc = Partition::sum([&b, &c]);
            prop_assert_eq!(Partition::sum([&ab, &c]), Partition::sum([&a, &bc]));
        }

        #[test]
        fn majorization_matches_oracle(
            a in partition_strategy(6, 7),
            b in partition_strategy(6, 7),
            h in -3i64..=3,
        ) {
            prop_assert_eq!(a.majorizes_with_offset(&b, h), majorizes_oracle(&a, &b, h));
        }

        #[test]
        fn mutual_majorization_of_equal_weight_is_equality(
            a in partition_strategy(6, 7),
            b in partition_strategy(6, 7),
        ) {
            if a.weight() == b.weight()
                && a.majorizes_with_offset(&b, 0)
                && b.majorizes_with_offset(&a, 0)
            {
                prop_assert_eq!(a, b);
            }
        }
    }
}
