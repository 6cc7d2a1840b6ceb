//! Closures, strong embeddings, copies and canonical forms.
//!
//! With neighbourhood functions in the language, a vertex set carries a
//! substructure only when it is *closed*: every `t`-subset with a non-empty
//! neighbourhood has that whole neighbourhood inside the set. Embeddings are
//! the maps whose image is such a set and which preserve blocks and function
//! values.

use std::collections::HashSet;
use std::fmt;
use std::ops::ControlFlow;

use sha2::{Digest, Sha256};

use crate::structures::{
    ClosureStructure, Order, OrderedPartialDesign, OrderedStructure, PartialDesign, Structure,
};
use crate::{Error, Result, VertexSet};

/// Default bound on the number of vertices for unordered canonical forms.
pub const DEFAULT_CANON_LIMIT: usize = 12;

/// Smallest closed superset of `subset`.
///
/// Iterates to a fixed point: each round adds the neighbourhoods of the
/// `t`-subsets that contain at least one vertex added in the previous round.
pub fn closure_of<S: Structure>(s: &S, subset: VertexSet) -> VertexSet {
    let cs = s.closure_structure();
    let t = cs.params().t();
    let mut closed = subset;
    let mut frontier = subset;
    loop {
        let mut added = VertexSet::EMPTY;
        for ts in closed.subsets(t) {
            if !ts.intersection(frontier).is_empty() {
                added = added.union(cs.neighborhood(ts));
            }
        }
        let added = added.difference(closed);
        if added.is_empty() {
            return closed;
        }
        closed = closed.union(added);
        frontier = added;
    }
}

pub fn is_closed<S: Structure>(s: &S, subset: VertexSet) -> bool {
    closure_of(s, subset) == subset
}

/// Closedness through blocks: a set is closed iff every block meeting it in
/// at least `t` vertices lies inside it.
pub fn is_closed_by_blocks(design: &PartialDesign, subset: VertexSet) -> bool {
    let t = design.params().t();
    design
        .blocks()
        .iter()
        .all(|b| b.is_subset(subset) || b.intersection(subset).len() < t)
}

/// All closed subsets of the universe with exactly `size` vertices.
pub fn closed_subsets(design: &PartialDesign, size: usize) -> impl Iterator<Item = VertexSet> + '_ {
    design
        .universe()
        .subsets(size)
        .filter(move |s| is_closed_by_blocks(design, *s))
}

/// Why a vertex map is not an embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbeddingFailure {
    /// The map does not have one entry per source vertex.
    DomainSize {
        expected: usize,
        found: usize,
    },
    /// Source and target have different parameters.
    LanguageMismatch,
    OutOfRange {
        vertex: usize,
    },
    NotInjective {
        vertex: usize,
    },
    /// A `k`-set of the source whose block status differs from its image's.
    Relation {
        kset: VertexSet,
    },
    /// A `t`-set of the source whose neighbourhood does not map onto the
    /// neighbourhood of its image.
    Function {
        tset: VertexSet,
    },
    /// A block of the target outside the image of the source blocks that
    /// meets the image in `t` or more vertices.
    OuterBlock {
        block: VertexSet,
    },
    /// `u < v` in the source but not their images in the target.
    Order {
        u: usize,
        v: usize,
    },
}

impl fmt::Display for EmbeddingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmbeddingFailure::DomainSize { expected, found } => {
                write!(f, "map has {found} entries, source has {expected} vertices")
            }
            EmbeddingFailure::LanguageMismatch => f.write_str("parameters differ"),
            EmbeddingFailure::OutOfRange { vertex } => {
                write!(f, "vertex {vertex} is mapped outside the target")
            }
            EmbeddingFailure::NotInjective { vertex } => {
                write!(f, "vertex {vertex} has the same image as an earlier vertex")
            }
            EmbeddingFailure::Relation { kset } => {
                write!(f, "relation not preserved on {{{kset}}}")
            }
            EmbeddingFailure::Function { tset } => {
                write!(f, "function value not preserved on {{{tset}}}")
            }
            EmbeddingFailure::OuterBlock { block } => {
                write!(
                    f,
                    "target block {{{block}}} meets the image in t or more vertices"
                )
            }
            EmbeddingFailure::Order { u, v } => write!(f, "order not preserved on {u} < {v}"),
        }
    }
}

fn check_shape(
    map: &[usize],
    a: &ClosureStructure,
    b: &ClosureStructure,
) -> Result<VertexSet, EmbeddingFailure> {
    if map.len() != a.n() {
        return Err(EmbeddingFailure::DomainSize {
            expected: a.n(),
            found: map.len(),
        });
    }
    if a.params() != b.params() {
        return Err(EmbeddingFailure::LanguageMismatch);
    }
    let mut image = VertexSet::EMPTY;
    for (x, &y) in map.iter().enumerate() {
        if y >= b.n() {
            return Err(EmbeddingFailure::OutOfRange { vertex: x });
        }
        if image.contains(y) {
            return Err(EmbeddingFailure::NotInjective { vertex: x });
        }
        image.insert(y);
    }
    Ok(image)
}

/// Condition on the relation: a `k`-set of the source is a block iff its
/// image is.
pub fn relation_preserved(map: &[usize], a: &ClosureStructure, b: &ClosureStructure) -> bool {
    relation_failure(map, a, b).is_none()
}

fn relation_failure(
    map: &[usize],
    a: &ClosureStructure,
    b: &ClosureStructure,
) -> Option<VertexSet> {
    for &blk in a.design().blocks() {
        if !b.design().has_block(blk.map(map)) {
            return Some(blk);
        }
    }
    let image: VertexSet = map.iter().copied().collect();
    let mut inverse = vec![usize::MAX; b.n()];
    for (x, &y) in map.iter().enumerate() {
        inverse[y] = x;
    }
    for &blk in b.design().blocks() {
        if blk.is_subset(image) {
            let pre = blk.map(&inverse);
            if !a.design().has_block(pre) {
                return Some(pre);
            }
        }
    }
    None
}

/// Condition on the functions: for every `t`-set `T` of the source,
/// `map(N_A(T)) = N_B(map(T))`, so domains and values correspond.
pub fn functions_preserved(map: &[usize], a: &ClosureStructure, b: &ClosureStructure) -> bool {
    function_failure(map, a, b).is_none()
}

fn function_failure(
    map: &[usize],
    a: &ClosureStructure,
    b: &ClosureStructure,
) -> Option<VertexSet> {
    let t = a.params().t();
    a.design()
        .universe()
        .subsets(t)
        .find(|&ts| a.neighborhood(ts).map(map) != b.neighborhood(ts.map(map)))
}

/// Every block of the target that is not the image of a source block meets
/// the image in at most `t - 1` vertices.
pub fn outer_blocks_thin(map: &[usize], a: &ClosureStructure, b: &ClosureStructure) -> bool {
    outer_block_failure(map, a, b).is_none()
}

fn outer_block_failure(
    map: &[usize],
    a: &ClosureStructure,
    b: &ClosureStructure,
) -> Option<VertexSet> {
    let t = a.params().t();
    let image: VertexSet = map.iter().copied().collect();
    let mapped: HashSet<VertexSet> = a.design().blocks().iter().map(|blk| blk.map(map)).collect();
    b.design()
        .blocks()
        .iter()
        .find(|blk| !mapped.contains(blk) && blk.intersection(image).len() >= t)
        .copied()
}

/// Checks every embedding condition and names the first one that fails.
pub fn diagnose_embedding<S: Structure, T: Structure>(
    map: &[usize],
    a: &S,
    b: &T,
) -> Result<(), EmbeddingFailure> {
    let (ca, cb) = (a.closure_structure(), b.closure_structure());
    check_shape(map, ca, cb)?;
    if let Some(kset) = relation_failure(map, ca, cb) {
        return Err(EmbeddingFailure::Relation { kset });
    }
    if let Some(tset) = function_failure(map, ca, cb) {
        return Err(EmbeddingFailure::Function { tset });
    }
    if let Some(block) = outer_block_failure(map, ca, cb) {
        return Err(EmbeddingFailure::OuterBlock { block });
    }
    if let (Some(oa), Some(ob)) = (a.order(), b.order()) {
        for w in oa.sequence().windows(2) {
            if !ob.less(map[w[0]], map[w[1]]) {
                return Err(EmbeddingFailure::Order { u: w[0], v: w[1] });
            }
        }
    }
    Ok(())
}

/// Whether `map` is an embedding of `a` into `b`. The order is only checked
/// when both structures are ordered.
pub fn check_embedding<S: Structure, T: Structure>(map: &[usize], a: &S, b: &T) -> bool {
    diagnose_embedding(map, a, b).is_ok()
}

/// For an injective map that preserves the relation, whether preservation of
/// the functions and thinness of the outer blocks agree. They always should
/// on valid structures; this exists to test that.
pub fn thin_iff_functions_preserved<S: Structure, T: Structure>(
    map: &[usize],
    a: &S,
    b: &T,
) -> Result<bool> {
    let (ca, cb) = (a.closure_structure(), b.closure_structure());
    check_shape(map, ca, cb).map_err(|e| Error::InvalidInput(e.to_string()))?;
    if !relation_preserved(map, ca, cb) {
        return Err(Error::InvalidInput(
            "map does not preserve the relation".into(),
        ));
    }
    Ok(functions_preserved(map, ca, cb) == outer_blocks_thin(map, ca, cb))
}

/// Calls `visit` with every isomorphism `a → b` of the underlying designs
/// (as `map[x] = image of x`) until it breaks. Order is ignored.
pub fn for_each_isomorphism<F>(a: &PartialDesign, b: &PartialDesign, visit: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    isomorphisms_extending(a, b, &[], visit);
}

/// Like [`for_each_isomorphism`], restricted to maps sending `x` to
/// `prefix[x]` for `x < prefix.len()`.
fn isomorphisms_extending<F>(a: &PartialDesign, b: &PartialDesign, prefix: &[usize], mut visit: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let n = a.n();
    if n != b.n() || a.params() != b.params() || a.num_blocks() != b.num_blocks() {
        return;
    }
    let deg_a = degrees(a);
    let deg_b = degrees(b);
    let mut sorted_a = deg_a.clone();
    let mut sorted_b = deg_b.clone();
    sorted_a.sort_unstable();
    sorted_b.sort_unstable();
    if sorted_a != sorted_b {
        return;
    }
    // source blocks grouped by their largest vertex, checked once it is mapped
    let mut closing: Vec<Vec<VertexSet>> = vec![Vec::new(); n];
    for &blk in a.blocks() {
        closing[blk.max().expect("non-empty block")].push(blk);
    }
    let search = IsoSearch {
        deg_a,
        deg_b,
        closing,
        targets: b.blocks().iter().copied().collect(),
        prefix,
    };
    let mut map = vec![usize::MAX; n];
    let _ = search.step(0, &mut map, VertexSet::EMPTY, &mut visit);
}

struct IsoSearch<'p> {
    deg_a: Vec<usize>,
    deg_b: Vec<usize>,
    closing: Vec<Vec<VertexSet>>,
    targets: HashSet<VertexSet>,
    prefix: &'p [usize],
}

impl IsoSearch<'_> {
    fn step<F>(
        &self,
        x: usize,
        map: &mut Vec<usize>,
        used: VertexSet,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if x == map.len() {
            return visit(map);
        }
        let candidates = match self.prefix.get(x) {
            Some(&y) => y..y + 1,
            None => 0..map.len(),
        };
        for y in candidates {
            if y >= map.len() || used.contains(y) || self.deg_b[y] != self.deg_a[x] {
                continue;
            }
            map[x] = y;
            if self.closing[x]
                .iter()
                .all(|blk| self.targets.contains(&blk.map(map)))
            {
                let mut next = used;
                next.insert(y);
                self.step(x + 1, map, next, visit)?;
            }
        }
        map[x] = usize::MAX;
        ControlFlow::Continue(())
    }
}

fn degrees(d: &PartialDesign) -> Vec<usize> {
    let mut deg = vec![0; d.n()];
    for blk in d.blocks() {
        for v in blk.iter() {
            deg[v] += 1;
        }
    }
    deg
}

/// Some isomorphism between two structures, respecting orders when both are
/// ordered.
pub fn find_isomorphism<S: Structure>(a: &S, b: &S) -> Option<Vec<usize>> {
    if let (Some(oa), Some(ob)) = (a.order(), b.order()) {
        if oa.len() != ob.len() {
            return None;
        }
        let mut map = vec![0; oa.len()];
        for (&x, &y) in oa.sequence().iter().zip(ob.sequence()) {
            map[x] = y;
        }
        let image = a.design().relabel(&map);
        return (image == *b.design()).then_some(map);
    }
    let mut found = None;
    for_each_isomorphism(a.design(), b.design(), |m| {
        found = Some(m.to_vec());
        ControlFlow::Break(())
    });
    found
}

/// Number of automorphisms of the underlying design (1 for ordered structures).
///
/// Computed as the product of orbit sizes along the chain of pointwise
/// stabilisers of `0, 1, …`, so only one automorphism per orbit point is
/// searched for.
pub fn automorphism_count<S: Structure>(s: &S) -> u128 {
    if s.order().is_some() {
        return 1;
    }
    let d = s.design();
    let mut total: u128 = 1;
    let mut prefix: Vec<usize> = Vec::with_capacity(d.n());
    for i in 0..d.n() {
        let mut orbit = 0u128;
        for w in i..d.n() {
            let mut trial = prefix.clone();
            trial.push(w);
            let mut exists = false;
            isomorphisms_extending(d, d, &trial, |_| {
                exists = true;
                ControlFlow::Break(())
            });
            orbit += exists as u128;
        }
        total = total.saturating_mul(orbit);
        prefix.push(i);
    }
    total
}

/// A copy of `A` in `B`: a closed vertex set of `B` whose induced
/// substructure is isomorphic to `A`, with one embedding onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Copy {
    pub vertices: VertexSet,
    pub embedding: Vec<usize>,
}

impl Copy {
    pub fn substructure<S: Structure>(&self, host: &S) -> S {
        host.restrict(self.vertices)
    }
}

/// All copies of `a` in `b`, in lexicographic order of their vertex sets.
///
/// For ordered structures each copy carries the unique order-preserving
/// embedding onto it.
pub fn enumerate_copies<S: Structure>(a: &S, b: &S) -> Vec<Copy> {
    let mut copies = Vec::new();
    for_each_copy(a, b, |vertices, embedding| {
        copies.push(Copy {
            vertices,
            embedding: embedding.to_vec(),
        });
        ControlFlow::Continue(())
    });
    copies
}

/// All embeddings of `a` into `b`.
pub fn enumerate_embeddings<S: Structure>(a: &S, b: &S) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if a.params() != b.params() {
        return out;
    }
    for vertices in closed_subsets(b.design(), a.n()) {
        let (host, inclusion) = b.design().induced(vertices);
        if host.num_blocks() != a.design().num_blocks() {
            continue;
        }
        if let (Some(_), Some(_)) = (a.order(), b.order()) {
            if let Some(emb) = ordered_copy_map(a, b, vertices) {
                out.push(emb);
            }
            continue;
        }
        for_each_isomorphism(a.design(), &host, |m| {
            out.push(m.iter().map(|&y| inclusion[y]).collect());
            ControlFlow::Continue(())
        });
    }
    out
}

fn ordered_copy_map<S: Structure>(a: &S, b: &S, vertices: VertexSet) -> Option<Vec<usize>> {
    let (oa, ob) = (a.order()?, b.order()?);
    let mut targets = vertices.to_vec();
    targets.sort_by_key(|&v| ob.rank(v));
    let mut map = vec![0; a.n()];
    for (&x, &y) in oa.sequence().iter().zip(&targets) {
        map[x] = y;
    }
    relation_preserved(&map, a.closure_structure(), b.closure_structure()).then_some(map)
}

fn for_each_copy<S: Structure, F>(a: &S, b: &S, mut visit: F)
where
    F: FnMut(VertexSet, &[usize]) -> ControlFlow<()>,
{
    if a.params() != b.params() {
        return;
    }
    for vertices in closed_subsets(b.design(), a.n()) {
        let (host, inclusion) = b.design().induced(vertices);
        if host.num_blocks() != a.design().num_blocks() {
            continue;
        }
        let emb = if a.order().is_some() && b.order().is_some() {
            ordered_copy_map(a, b, vertices)
        } else {
            let mut found = None;
            for_each_isomorphism(a.design(), &host, |m| {
                found = Some(m.iter().map(|&y| inclusion[y]).collect());
                ControlFlow::Break(())
            });
            found
        };
        if let Some(emb) = emb {
            if visit(vertices, &emb).is_break() {
                return;
            }
        }
    }
}

/// An isomorphism invariant that identifies a structure up to isomorphism
/// (order-isomorphism for ordered structures).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    bytes: Vec<u8>,
    labeling: Vec<usize>,
}

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// `labeling[v]` is the canonical label of vertex `v`.
    pub fn labeling(&self) -> &[usize] {
        &self.labeling
    }

    /// Lowercase hex SHA-256 of the form.
    pub fn digest_hex(&self) -> String {
        let digest = Sha256::digest(&self.bytes);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// The structure relabelled canonically (with the natural order when ordered).
    pub fn canonical_design<S: Structure>(&self, s: &S) -> OrderedPartialDesign {
        OrderedPartialDesign::natural(s.design().relabel(&self.labeling))
    }
}

/// Canonical form with the default size bound.
pub fn canonical_form<S: Structure>(s: &S) -> Result<CanonicalForm> {
    canonical_form_with_limit(s, DEFAULT_CANON_LIMIT)
}

/// Canonical form of a structure.
///
/// Ordered structures are relabelled by rank. Unordered structures are
/// relabelled to maximise the block incidence string over all `k`-sets in
/// colexicographic order, searching only labelings that list vertices by
/// non-increasing degree, keeping at each level only the candidates whose
/// next chunk of the string is largest, and skipping a candidate when a
/// vertex it can be swapped with by an automorphism has been tried.
/// Unordered structures with more than `limit` vertices are refused.
pub fn canonical_form_with_limit<S: Structure>(s: &S, limit: usize) -> Result<CanonicalForm> {
    let design = s.design();
    let labeling = match s.order() {
        Some(order) => order.ranks().to_vec(),
        None => {
            if design.n() > limit {
                return Err(Error::SizeLimit {
                    n: design.n(),
                    limit,
                });
            }
            canonical_labeling(design)
        }
    };
    Ok(CanonicalForm {
        bytes: serialize(design, &labeling, s.order().is_some()),
        labeling,
    })
}

fn serialize(design: &PartialDesign, labeling: &[usize], ordered: bool) -> Vec<u8> {
    let p = design.params();
    let mut bytes = vec![ordered as u8];
    for x in [p.k(), p.t(), p.lambda(), design.n()] {
        bytes.extend_from_slice(&(x as u32).to_le_bytes());
    }
    let mut blocks: Vec<VertexSet> = design.blocks().iter().map(|b| b.map(labeling)).collect();
    blocks.sort();
    for b in blocks {
        bytes.extend_from_slice(&b.bits().to_le_bytes());
    }
    bytes
}

struct Canonizer {
    n: usize,
    k: usize,
    blocks: HashSet<VertexSet>,
    degree: Vec<usize>,
    twin_class: Vec<usize>,
    /// (k-1)-subsets of `0..n-1` in colex order.
    colex: Vec<VertexSet>,
    /// Number of (k-1)-subsets of `0..m`, indexed by `m`.
    colex_len: Vec<usize>,
    best: Option<(Vec<u8>, Vec<usize>)>,
}

fn canonical_labeling(design: &PartialDesign) -> Vec<usize> {
    let n = design.n();
    let k = design.params().k();
    let blocks: HashSet<VertexSet> = design.blocks().iter().copied().collect();
    let degree = degrees(design);

    // vertices u, w are twins when the transposition (u w) is an automorphism
    let mut twin_class: Vec<usize> = (0..n).collect();
    for u in 0..n {
        if twin_class[u] != u {
            continue;
        }
        for w in u + 1..n {
            if twin_class[w] != w || degree[u] != degree[w] {
                continue;
            }
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(u, w);
            if design
                .blocks()
                .iter()
                .all(|b| blocks.contains(&b.map(&swap)))
            {
                twin_class[w] = u;
            }
        }
    }

    let mut colex: Vec<VertexSet> = if k >= 1 && n >= 1 {
        VertexSet::full(n).subsets(k - 1).collect()
    } else {
        Vec::new()
    };
    colex.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    let colex_len = (0..=n)
        .map(|m| {
            colex
                .iter()
                .filter(|q| q.is_subset(VertexSet::full(m)))
                .count()
        })
        .collect();

    let mut c = Canonizer {
        n,
        k,
        blocks,
        degree,
        twin_class,
        colex,
        colex_len,
        best: None,
    };
    let mut labeled = Vec::with_capacity(n);
    let mut string = Vec::new();
    c.search(&mut labeled, VertexSet::EMPTY, &mut string);
    let (_, order) = c.best.expect("at least one labeling");
    let mut labeling = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        labeling[old] = new;
    }
    labeling
}

impl Canonizer {
    fn chunk(&self, labeled: &[usize], v: usize) -> Vec<u8> {
        let m = labeled.len();
        if self.k == 0 {
            return Vec::new();
        }
        self.colex[..self.colex_len[m]]
            .iter()
            .map(|q| {
                let mut blk: VertexSet = q.iter().map(|i| labeled[i]).collect();
                blk.insert(v);
                self.blocks.contains(&blk) as u8
            })
            .collect()
    }

    fn search(&mut self, labeled: &mut Vec<usize>, used: VertexSet, string: &mut Vec<u8>) {
        if labeled.len() == self.n {
            let better = match &self.best {
                None => true,
                Some((best, _)) => string.as_slice() > best.as_slice(),
            };
            if better {
                self.best = Some((string.clone(), labeled.clone()));
            }
            return;
        }
        let top = (0..self.n)
            .filter(|&v| !used.contains(v))
            .map(|v| self.degree[v])
            .max()
            .expect("unlabelled vertex");
        let mut candidates: Vec<(usize, Vec<u8>)> = (0..self.n)
            .filter(|&v| !used.contains(v) && self.degree[v] == top)
            .map(|v| (v, self.chunk(labeled, v)))
            .collect();
        let best_chunk = candidates
            .iter()
            .map(|(_, c)| c.clone())
            .max()
            .expect("candidate");
        candidates.retain(|(_, c)| *c == best_chunk);

        let len = string.len();
        string.extend_from_slice(&best_chunk);
        if let Some((best, _)) = &self.best {
            if string.as_slice() < &best[..string.len()] {
                string.truncate(len);
                return;
            }
        }
        let mut tried_classes = Vec::new();
        for (v, _) in candidates {
            let class = self.twin_class[v];
            if tried_classes.contains(&class) {
                continue;
            }
            tried_classes.push(class);
            labeled.push(v);
            let mut next = used;
            next.insert(v);
            self.search(labeled, next, string);
            labeled.pop();
        }
        string.truncate(len);
    }
}

/// Representative of an ordered structure's order-isomorphism class as a
/// design with the natural order.
pub fn ordered_representative(s: &OrderedStructure) -> OrderedPartialDesign {
    OrderedPartialDesign::natural(s.design().relabel(s.order.ranks()))
}

/// Convenience: ordered structure from a design and an order sequence.
pub fn ordered(design: PartialDesign, sequence: Vec<usize>) -> Result<OrderedStructure> {
    OrderedStructure::new(
        ClosureStructure::new(design)?,
        Order::from_sequence(sequence)?,
    )
}
