//! Structural description of a pencil: eigenvalues with their Segre
//! characteristics, singular minimal indices, sizes, bundle signatures, and
//! the ASCII grammar for all of it.
//!
//! The stored eigenstructure is always the Segre characteristic (Jordan
//! block sizes); the Weyr characteristic is derived on demand by
//! conjugation, never stored, so the two views cannot drift apart.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, Zero};

use crate::exact::GaussianRational;
use crate::partitions::Partition;
use crate::{Error, Result};

/// A point of the Riemann sphere, exactly representable or deliberately
/// anonymous.
///
/// `Symbolic` labels stand for pairwise distinct unspecified values; two
/// symbolic eigenvalues denote the same point exactly when their labels
/// match.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Eigenvalue {
    Finite(GaussianRational),
    Infinity,
    Symbolic(String),
}

impl Eigenvalue {
    pub fn from_int(n: i64) -> Self {
        Eigenvalue::Finite(GaussianRational::from_int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Eigenvalue::Finite(GaussianRational::from_ratio(num, den))
    }

    pub fn symbolic(label: impl Into<String>) -> Self {
        Eigenvalue::Symbolic(label.into())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Eigenvalue::Finite(_))
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Eigenvalue::Symbolic(_))
    }

    /// Parses a single eigenvalue token (`inf`, `@label`, `-3/2`, `1+1i`, …).
    pub fn parse(text: &str) -> Result<Eigenvalue> {
        let mut scanner = Scanner::new(text);
        scanner.skip_ws();
        let eig = scanner.eigenvalue()?;
        scanner.skip_ws();
        scanner.expect_end()?;
        Ok(eig)
    }
}

impl PartialOrd for Eigenvalue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Eigenvalue {
    /// Canonical order: finite values by `(re, im)` lexicographically, then
    /// the infinite eigenvalue, then symbolic labels alphabetically.
    fn cmp(&self, other: &Self) -> Ordering {
        use Eigenvalue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.lex_cmp(b),
            (Finite(_), _) => Ordering::Less,
            (_, Finite(_)) => Ordering::Greater,
            (Infinity, Infinity) => Ordering::Equal,
            (Infinity, Symbolic(_)) => Ordering::Less,
            (Symbolic(_), Infinity) => Ordering::Greater,
            (Symbolic(a), Symbolic(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eigenvalue::Finite(g) => write!(f, "{}", g),
            Eigenvalue::Infinity => write!(f, "inf"),
            Eigenvalue::Symbolic(label) => write!(f, "@{}", label),
        }
    }
}

impl fmt::Debug for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The full strict-equivalence invariant of an `m×n` pencil: Segre
/// characteristic per distinct eigenvalue plus the multisets of right and
/// left minimal indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PencilStructure {
    rows: usize,
    cols: usize,
    eig: BTreeMap<Eigenvalue, Partition>,
    right: Vec<usize>,
    left: Vec<usize>,
}

impl PencilStructure {
    /// Builds and validates a structure. Empty Segre partitions are
    /// stripped (an eigenvalue with no blocks is simply absent); minimal
    /// index multisets are stored sorted descending.
    pub fn new(
        rows: usize,
        cols: usize,
        eig: BTreeMap<Eigenvalue, Partition>,
        right: Vec<usize>,
        left: Vec<usize>,
    ) -> Result<Self> {
        let s = Self::new_unchecked(rows, cols, eig, right, left);
        let problems = s.diagnostics();
        if problems.is_empty() {
            Ok(s)
        } else {
            Err(Error::InvalidStructure(problems.join("; ")))
        }
    }

    /// Builds without validating the counting identities. Useful for
    /// feeding [`validate`](Self::validate) with deliberately broken data.
    pub fn new_unchecked(
        rows: usize,
        cols: usize,
        mut eig: BTreeMap<Eigenvalue, Partition>,
        mut right: Vec<usize>,
        mut left: Vec<usize>,
    ) -> Self {
        eig.retain(|_, p| !p.is_empty());
        right.sort_unstable_by(|a, b| b.cmp(a));
        left.sort_unstable_by(|a, b| b.cmp(a));
        PencilStructure {
            rows,
            cols,
            eig,
            right,
            left,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Distinct eigenvalues in canonical order.
    pub fn eigenvalues(&self) -> impl Iterator<Item = &Eigenvalue> {
        self.eig.keys()
    }

    pub fn eigenvalue_count(&self) -> usize {
        self.eig.len()
    }

    /// Segre characteristic at `e`; empty if `e` is not an eigenvalue.
    pub fn segre_at(&self, e: &Eigenvalue) -> Partition {
        self.eig.get(e).cloned().unwrap_or_default()
    }

    /// Right minimal indices, descending (one entry per right singular block).
    pub fn right_indices(&self) -> &[usize] {
        &self.right
    }

    /// Left minimal indices, descending.
    pub fn left_indices(&self) -> &[usize] {
        &self.left
    }

    fn regular_weight(&self) -> usize {
        self.eig.values().map(Partition::weight).sum()
    }

    /// All counting-identity violations, empty when the structure is valid.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let w = self.regular_weight();
        let col_count: usize =
            w + self.right.iter().map(|e| e + 1).sum::<usize>() + self.left.iter().sum::<usize>();
        if col_count != self.cols {
            problems.push(format!("column count {} != {}", col_count, self.cols));
        }
        let row_count: usize =
            w + self.right.iter().sum::<usize>() + self.left.iter().map(|e| e + 1).sum::<usize>();
        if row_count != self.rows {
            problems.push(format!("row count {} != {}", row_count, self.rows));
        }
        if col_count == self.cols && row_count == self.rows {
            // implied by the two identities, but warn independently anyway
            let from_right = self.cols as i64 - self.right.len() as i64;
            let from_left = self.rows as i64 - self.left.len() as i64;
            if from_right != from_left {
                problems.push(format!("rank mismatch: {} vs {}", from_right, from_left));
            }
        }
        problems
    }

    /// True iff the Kronecker counting identities hold.
    pub fn validate(&self) -> bool {
        self.diagnostics().is_empty()
    }

    /// Normal rank: `n − #right blocks` (equivalently `m − #left blocks`).
    pub fn rank(&self) -> usize {
        self.cols - self.right.len()
    }

    /// Weyr characteristic at `e`: the conjugate of the Segre characteristic,
    /// empty when `e` is not an eigenvalue.
    pub fn weyr_at(&self, e: &Eigenvalue) -> Partition {
        self.eig
            .get(e)
            .map(Partition::conjugate)
            .unwrap_or_default()
    }

    /// The list whose `i`-th entry (from 0) counts right singular blocks of
    /// index `≥ i`; its first entry is `n − rank`.
    pub fn right_weyr(&self) -> Partition {
        singular_weyr(&self.right)
    }

    /// Same for the left singular blocks.
    pub fn left_weyr(&self) -> Partition {
        singular_weyr(&self.left)
    }

    /// Forgets the eigenvalue values, keeping only the multiset of Segre
    /// characteristics. Two structures lie in the same bundle exactly when
    /// their signatures are equal.
    pub fn signature(&self) -> BundleSignature {
        BundleSignature::new(
            self.rows,
            self.cols,
            self.eig.values().cloned().collect(),
            self.right.clone(),
            self.left.clone(),
        )
    }

    /// Parses the `"MxN: block*"` grammar. Inputs with inconsistent counts
    /// are rejected after parsing.
    pub fn parse(text: &str) -> Result<Self> {
        let mut scanner = Scanner::new(text);
        scanner.structure()
    }

    /// Canonical text form; `parse` of it returns `self`.
    pub fn serialize(&self) -> String {
        let mut out = format!("{}x{}:", self.rows, self.cols);
        for (e, segre) in &self.eig {
            let parts: Vec<String> = segre.parts().iter().map(|p| p.to_string()).collect();
            out.push_str(&format!(" J({};{})", e, parts.join(",")));
        }
        for k in &self.right {
            out.push_str(&format!(" R({})", k));
        }
        for k in &self.left {
            out.push_str(&format!(" LT({})", k));
        }
        out
    }
}

impl fmt::Display for PencilStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

impl fmt::Debug for PencilStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

fn singular_weyr(indices: &[usize]) -> Partition {
    let Some(&max) = indices.iter().max() else {
        return Partition::empty();
    };
    let mut parts = Vec::with_capacity(max + 1);
    for i in 0..=max {
        parts.push(indices.iter().filter(|&&k| k >= i).count());
    }
    Partition::new(parts)
}

/// A bundle: the KCF up to the values of the distinct eigenvalues. Keeps
/// the multiset of Segre characteristics (canonically sorted descending)
/// and the singular data.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BundleSignature {
    rows: usize,
    cols: usize,
    segre: Vec<Partition>,
    right: Vec<usize>,
    left: Vec<usize>,
}

impl BundleSignature {
    pub fn new(
        rows: usize,
        cols: usize,
        mut segre: Vec<Partition>,
        mut right: Vec<usize>,
        mut left: Vec<usize>,
    ) -> Self {
        segre.retain(|p| !p.is_empty());
        segre.sort_unstable_by(|a, b| b.cmp(a));
        right.sort_unstable_by(|a, b| b.cmp(a));
        left.sort_unstable_by(|a, b| b.cmp(a));
        BundleSignature {
            rows,
            cols,
            segre,
            right,
            left,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Segre characteristics of the anonymous eigenvalues, descending.
    pub fn segre_multiset(&self) -> &[Partition] {
        &self.segre
    }

    pub fn right_indices(&self) -> &[usize] {
        &self.right
    }

    pub fn left_indices(&self) -> &[usize] {
        &self.left
    }

    pub fn eigenvalue_count(&self) -> usize {
        self.segre.len()
    }

    pub fn rank(&self) -> usize {
        self.cols - self.right.len()
    }

    /// Realizes the signature as a structure, naming the `i`-th anonymous
    /// eigenvalue (0-based, canonical order) via `name`. Names must be
    /// pairwise distinct.
    pub fn instantiate(&self, name: impl Fn(usize) -> Eigenvalue) -> Result<PencilStructure> {
        let mut eig = BTreeMap::new();
        for (i, p) in self.segre.iter().enumerate() {
            let e = name(i);
            if eig.insert(e.clone(), p.clone()).is_some() {
                return Err(Error::TargetCollision(e.to_string()));
            }
        }
        PencilStructure::new(
            self.rows,
            self.cols,
            eig,
            self.right.clone(),
            self.left.clone(),
        )
    }

    /// Instantiation with fresh symbolic labels `@e1, @e2, …`.
    pub fn instantiate_symbolic(&self) -> PencilStructure {
        self.instantiate(|i| Eigenvalue::symbolic(format!("e{}", i + 1)))
            .expect("symbolic labels are distinct")
    }

    /// Stable identifier: the canonical serialization with `@e1, @e2, …`
    /// placeholder eigenvalues. Parses back to [`instantiate_symbolic`].
    ///
    /// [`instantiate_symbolic`]: Self::instantiate_symbolic
    pub fn canonical_text(&self) -> String {
        self.instantiate_symbolic().serialize()
    }
}

impl fmt::Display for BundleSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_text())
    }
}

impl fmt::Debug for BundleSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_text())
    }
}

struct Scanner<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner { text, pos: 0 }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c)))
        }
    }

    fn expect_end(&self) -> Result<()> {
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(self.error("trailing input"))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.rest().starts_with(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            Err(self.error("expected digits"))
        } else {
            Ok(&self.text[start..self.pos])
        }
    }

    fn integer(&mut self) -> Result<usize> {
        let digits = self.digits()?;
        digits.parse().map_err(|_| self.error("integer too large"))
    }

    /// `["-"] INT ["/" INT]`
    fn rational(&mut self) -> Result<BigRational> {
        let negative = if self.peek() == Some('-') {
            self.bump();
            true
        } else {
            false
        };
        let numer: BigInt = self.digits()?.parse().expect("digits form an integer");
        let denom: BigInt = if self.peek() == Some('/') {
            self.bump();
            self.digits()?.parse().expect("digits form an integer")
        } else {
            BigInt::from(1)
        };
        if denom.is_zero() {
            return Err(self.error("zero denominator"));
        }
        let r = BigRational::new(numer, denom);
        Ok(if negative { -r } else { r })
    }

    /// `"inf" | "@" IDENT | RAT [("+"|"-") RAT "i"]`
    fn eigenvalue(&mut self) -> Result<Eigenvalue> {
        if self.eat_keyword("inf") {
            return Ok(Eigenvalue::Infinity);
        }
        if self.peek() == Some('@') {
            self.bump();
            let start = self.pos;
            while self
                .peek()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                self.bump();
            }
            if self.pos == start {
                return Err(self.error("expected identifier after '@'"));
            }
            let label = &self.text[start..self.pos];
            if !label.chars().next().unwrap().is_ascii_alphabetic() && !label.starts_with('_') {
                return Err(self.error("identifier must start with a letter or '_'"));
            }
            return Ok(Eigenvalue::Symbolic(label.to_string()));
        }
        let re = self.rational()?;
        let sign = match self.peek() {
            Some('+') => Some(false),
            Some('-') => Some(true),
            _ => None,
        };
        let Some(negate) = sign else {
            return Ok(Eigenvalue::Finite(GaussianRational::from_real(re)));
        };
        self.bump();
        let im = self.rational()?;
        self.expect('i')?;
        let im = if negate { -im } else { im };
        Ok(Eigenvalue::Finite(GaussianRational::new(re, im)))
    }

    /// Segre list inside a `J` block; non-increasing positive integers.
    fn segre_list(&mut self) -> Result<Partition> {
        let mut parts = vec![self.integer()?];
        while self.peek() == Some(',') {
            self.bump();
            parts.push(self.integer()?);
        }
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(self.error("Segre list must be non-increasing"));
            }
        }
        if parts.contains(&0) {
            return Err(self.error("Segre parts must be positive"));
        }
        Ok(Partition::new(parts))
    }

    fn structure(&mut self) -> Result<PencilStructure> {
        self.skip_ws();
        let rows = self.integer()?;
        self.expect('x')?;
        let cols = self.integer()?;
        self.skip_ws();
        self.expect(':')?;

        let mut eig: BTreeMap<Eigenvalue, Partition> = BTreeMap::new();
        let mut right = Vec::new();
        let mut left = Vec::new();
        loop {
            self.skip_ws();
            if self.rest().is_empty() {
                break;
            }
            if self.eat_keyword("J(") {
                let e = self.eigenvalue()?;
                self.expect(';')?;
                let segre = self.segre_list()?;
                self.expect(')')?;
                // repeated J blocks for one eigenvalue merge by part union
                let entry = eig.entry(e).or_default();
                *entry = Partition::union([&*entry, &segre]);
            } else if self.eat_keyword("LT(") {
                left.push(self.integer()?);
                self.expect(')')?;
            } else if self.eat_keyword("R(") {
                right.push(self.integer()?);
                self.expect(')')?;
            } else {
                return Err(self.error("expected a J(...), R(...) or LT(...) block"));
            }
        }
        PencilStructure::new(rows, cols, eig, right, left)
    }
}
