//! Enumeration of all bundles of a given size and the closure hierarchy
//! they form: the inclusion partial order, its Hasse diagram, the Jordan
//! codimension label, and DOT/JSON export.

use serde::Serialize;

use crate::closure::bundle_closure_contains;
use crate::par;
use crate::partitions::Partition;
use crate::structure::{BundleSignature, PencilStructure};

/// All bundles of `m×n` pencils, each signature exactly once, canonically
/// sorted.
///
/// The walk follows the finiteness argument: for each normal rank `ρ` the
/// right multiset has exactly `n−ρ` indices and the left one `m−ρ`, their
/// sums fit under `ρ`, and whatever regular weight `δ = ρ − Σε − Ση`
/// remains is distributed as a multiset of nonempty partitions, one per
/// anonymous eigenvalue.
pub fn enumerate_bundles(m: usize, n: usize) -> Vec<BundleSignature> {
    let mut out = Vec::new();
    for rho in 0..=m.min(n) {
        let n_right = n - rho;
        let n_left = m - rho;
        for right_sum in 0..=rho {
            for right in index_multisets(n_right, right_sum) {
                for left_sum in 0..=rho - right_sum {
                    for left in index_multisets(n_left, left_sum) {
                        let weight = rho - right_sum - left_sum;
                        for segre in partition_multisets(weight) {
                            out.push(BundleSignature::new(
                                m,
                                n,
                                segre,
                                right.clone(),
                                left.clone(),
                            ));
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Non-increasing sequences of exactly `len` non-negative integers with
/// the given sum.
fn index_multisets(len: usize, sum: usize) -> Vec<Vec<usize>> {
    fn rec(len: usize, sum: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if len == 0 {
            if sum == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for first in (0..=sum.min(cap)).rev() {
            // remaining entries are bounded by `first`, so `sum - first`
            // must fit into `(len-1) * first`
            if sum - first > (len - 1) * first {
                continue;
            }
            prefix.push(first);
            rec(len - 1, sum - first, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, sum, sum, &mut Vec::new(), &mut out);
    out
}

/// All partitions of `w` (weight exactly `w`, `w ≥ 1`), each part bounded
/// by `max_part`.
fn partitions_of(w: usize, max_part: usize) -> Vec<Partition> {
    fn rec(w: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if w == 0 {
            out.push(Partition::new(prefix.clone()));
            return;
        }
        for first in (1..=w.min(cap)).rev() {
            prefix.push(first);
            rec(w - first, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(w, max_part, &mut Vec::new(), &mut out);
    out
}

/// Multisets of nonempty partitions with total weight exactly `w`;
/// `w = 0` gives the single empty multiset.
fn partition_multisets(w: usize) -> Vec<Vec<Partition>> {
    fn rec(
        w: usize,
        cap: Option<&Partition>,
        prefix: &mut Vec<Partition>,
        out: &mut Vec<Vec<Partition>>,
    ) {
        if w == 0 {
            out.push(prefix.clone());
            return;
        }
        let mut candidates: Vec<Partition> = (1..=w).flat_map(|k| partitions_of(k, k)).collect();
        candidates.sort_by(|a, b| b.cmp(a));
        for c in candidates {
            if cap.is_some_and(|cap| &c > cap) {
                continue;
            }
            prefix.push(c.clone());
            rec(w - c.weight(), Some(&c), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(w, None, &mut Vec::new(), &mut out);
    out
}

/// The Jordan part of the orbit codimension:
/// `c_Jor = Σ_μ (S_1 + 3·S_2 + 5·S_3 + ⋯)` over the Segre characteristics.
/// Invariant under relabeling and under any coalescence (sums of Segre
/// lists redistribute the same terms).
pub fn c_jor(sig: &BundleSignature) -> u64 {
    sig.segre_multiset()
        .iter()
        .flat_map(|segre| {
            segre
                .parts()
                .iter()
                .enumerate()
                .map(|(i, &s)| (2 * i as u64 + 1) * s as u64)
        })
        .sum()
}

/// A node of the bundle hierarchy. The id is the canonical signature text,
/// stable across runs.
#[derive(Clone, Debug)]
pub struct HierarchyNode {
    pub id: String,
    pub signature: BundleSignature,
    pub c_jor: u64,
    pub eig_count: usize,
}

/// The closure hierarchy of all bundles of one size: nodes carry bundle
/// signatures, and an edge `(from, to)` means `closure(B(to))` is strictly
/// contained in `closure(B(from))` with nothing properly in between (the
/// edges are the transitive reduction of the full inclusion order).
#[derive(Clone, Debug)]
pub struct HierarchyGraph {
    rows: usize,
    cols: usize,
    nodes: Vec<HierarchyNode>,
    edges: Vec<(usize, usize)>,
}

impl HierarchyGraph {
    pub fn size(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nodes(&self) -> &[HierarchyNode] {
        &self.nodes
    }

    /// Cover edges as index pairs into [`nodes`](Self::nodes).
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Builds the bundle hierarchy of size `m×n`, testing all ordered pairs
/// with [`bundle_closure_contains`] (in parallel when enabled) and taking
/// the transitive reduction.
pub fn hasse(m: usize, n: usize) -> HierarchyGraph {
    build_hasse(m, n, true)
}

/// Sequential variant of [`hasse`]; same output, one pair at a time.
pub fn hasse_seq(m: usize, n: usize) -> HierarchyGraph {
    build_hasse(m, n, false)
}

fn build_hasse(m: usize, n: usize, parallel: bool) -> HierarchyGraph {
    let sigs = enumerate_bundles(m, n);
    let structures: Vec<PencilStructure> = sigs
        .iter()
        .map(BundleSignature::instantiate_symbolic)
        .collect();
    let count = sigs.len();

    let pairs: Vec<(usize, usize)> = (0..count)
        .flat_map(|i| (0..count).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();
    let flags = par::map_items(parallel, &pairs, |&(i, j)| {
        bundle_closure_contains(&structures[i], &structures[j])
            .expect("same-size instantiated structures")
            .0
    });
    let mut relation = vec![false; count * count];
    for (&(i, j), &flag) in pairs.iter().zip(&flags) {
        relation[i * count + j] = flag;
    }
    for i in 0..count {
        for j in 0..count {
            // the inclusion order is antisymmetric; distinct signatures
            // can never contain each other mutually
            debug_assert!(!(i != j && relation[i * count + j] && relation[j * count + i]));
        }
    }

    let mut edges = Vec::new();
    for i in 0..count {
        for j in 0..count {
            if i == j || !relation[i * count + j] {
                continue;
            }
            let covered = (0..count)
                .any(|k| k != i && k != j && relation[i * count + k] && relation[k * count + j]);
            if !covered {
                edges.push((i, j));
            }
        }
    }

    let nodes = sigs
        .into_iter()
        .map(|sig| HierarchyNode {
            id: sig.canonical_text(),
            c_jor: c_jor(&sig),
            eig_count: sig.eigenvalue_count(),
            signature: sig,
        })
        .collect();
    HierarchyGraph {
        rows: m,
        cols: n,
        nodes,
        edges,
    }
}

/// Graphviz text for the hierarchy; deterministic node and edge order.
pub fn export_dot(g: &HierarchyGraph) -> String {
    let mut out = String::from("digraph bundles {\n");
    out.push_str("  node [shape=box fontname=\"monospace\"];\n");
    for node in &g.nodes {
        out.push_str(&format!(
            "  \"{}\" [label=\"{}\\nc_jor={} eigs={}\"];\n",
            node.id, node.id, node.c_jor, node.eig_count
        ));
    }
    for &(from, to) in &g.edges {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\";\n",
            g.nodes[from].id, g.nodes[to].id
        ));
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct JsonNode<'a> {
    id: &'a str,
    signature: &'a str,
    c_jor: u64,
    eig_count: usize,
}

#[derive(Serialize)]
struct JsonEdge<'a> {
    from: &'a str,
    to: &'a str,
}

#[derive(Serialize)]
struct JsonGraph<'a> {
    size: [usize; 2],
    nodes: Vec<JsonNode<'a>>,
    edges: Vec<JsonEdge<'a>>,
}

/// JSON text for the hierarchy:
/// `{"size":[m,n],"nodes":[{"id","signature","c_jor","eig_count"}],"edges":[{"from","to"}]}`.
pub fn export_json(g: &HierarchyGraph) -> String {
    let doc = JsonGraph {
        size: [g.rows, g.cols],
        nodes: g
            .nodes
            .iter()
            .map(|n| JsonNode {
                id: &n.id,
                signature: &n.id,
                c_jor: n.c_jor,
                eig_count: n.eig_count,
            })
            .collect(),
        edges: g
            .edges
            .iter()
            .map(|&(from, to)| JsonEdge {
                from: &g.nodes[from].id,
                to: &g.nodes[to].id,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("graph serializes")
}
