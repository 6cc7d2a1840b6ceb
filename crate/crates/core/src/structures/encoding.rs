use std::collections::BTreeMap;

use super::{Params, PartialDesign};
use crate::{Error, Result, VertexSet};

/// A partial design viewed as a structure in the language with one `k`-ary
/// relation and partial functions `F^k, …, F^K` from `t`-tuples to sets.
///
/// The relation is the set of blocks (each block standing for all of its
/// orderings). The function table maps every `t`-set with a non-empty
/// neighbourhood `N` to `N`; a tuple lies in the domain of `F^ℓ` exactly when
/// `|N| = ℓ`. The table is derived from the blocks when the structure is built
/// by [`ClosureStructure::new`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosureStructure {
    design: PartialDesign,
    table: BTreeMap<VertexSet, VertexSet>,
}

impl ClosureStructure {
    pub fn new(design: PartialDesign) -> Result<Self> {
        design.ensure_valid()?;
        let table = function_table(&design);
        Ok(ClosureStructure { design, table })
    }

    /// Assembles a structure from a design and an explicit function table
    /// without checking that they agree. See [`check_consistency`](Self::check_consistency).
    pub fn from_parts(design: PartialDesign, table: BTreeMap<VertexSet, VertexSet>) -> Self {
        ClosureStructure { design, table }
    }

    pub fn design(&self) -> &PartialDesign {
        &self.design
    }

    pub fn into_design(self) -> PartialDesign {
        self.design
    }

    pub fn params(&self) -> Params {
        self.design.params()
    }

    pub fn n(&self) -> usize {
        self.design.n()
    }

    /// Entries `t-set ↦ neighbourhood` for every `t`-set in some function domain.
    pub fn table(&self) -> &BTreeMap<VertexSet, VertexSet> {
        &self.table
    }

    /// Neighbourhood of a `t`-set as recorded in the table (empty when the
    /// `t`-set is in no domain).
    pub fn neighborhood(&self, tset: VertexSet) -> VertexSet {
        self.table.get(&tset).copied().unwrap_or_default()
    }

    /// `F^ℓ(x_1, …, x_t)`. Tuples with repeated vertices, or whose
    /// neighbourhood does not have size `ℓ`, are outside the domain.
    pub fn apply(&self, ell: usize, tuple: &[usize]) -> Option<VertexSet> {
        let key: VertexSet = tuple.iter().copied().collect();
        if tuple.len() != self.params().t() || key.len() != tuple.len() {
            return None;
        }
        self.table.get(&key).copied().filter(|nb| nb.len() == ell)
    }

    /// The `t`-sets in the domain of `F^ℓ`, each standing for its `t!`
    /// orderings.
    pub fn domain(&self, ell: usize) -> impl Iterator<Item = VertexSet> + '_ {
        self.table
            .iter()
            .filter(move |(_, nb)| nb.len() == ell)
            .map(|(ts, _)| *ts)
    }

    /// Number of ordered `t`-tuples in the domain of `F^ℓ`.
    pub fn domain_size(&self, ell: usize) -> usize {
        let t = self.params().t();
        let orderings: usize = (1..=t).product();
        self.domain(ell).count() * orderings
    }

    /// Checks that the table is exactly the one determined by the blocks.
    pub fn check_consistency(&self) -> Result<()> {
        self.design.ensure_valid()?;
        let derived = function_table(&self.design);
        if derived == self.table {
            return Ok(());
        }
        let tset = derived
            .iter()
            .find(|(ts, nb)| self.table.get(ts) != Some(nb))
            .map(|(ts, _)| *ts)
            .or_else(|| {
                self.table
                    .keys()
                    .find(|ts| !derived.contains_key(ts))
                    .copied()
            })
            .unwrap_or_default();
        Err(Error::InconsistentStructure {
            tset: tset.to_vec(),
        })
    }
}

fn function_table(design: &PartialDesign) -> BTreeMap<VertexSet, VertexSet> {
    let t = design.params().t();
    let mut table: BTreeMap<VertexSet, VertexSet> = BTreeMap::new();
    for &block in design.blocks() {
        for ts in block.subsets(t) {
            let nb = table.entry(ts).or_default();
            *nb = nb.union(block);
        }
    }
    table
}

/// A linear order on `0..n`, kept as the increasing sequence of vertices and
/// its inverse (the rank of each vertex).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Order {
    sequence: Vec<usize>,
    rank: Vec<usize>,
}

impl Order {
    pub fn natural(n: usize) -> Self {
        Order {
            sequence: (0..n).collect(),
            rank: (0..n).collect(),
        }
    }

    /// `sequence[i]` is the `i`-th smallest vertex.
    pub fn from_sequence(sequence: Vec<usize>) -> Result<Self> {
        let n = sequence.len();
        let mut rank = vec![usize::MAX; n];
        for (i, &v) in sequence.iter().enumerate() {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if rank[v] != usize::MAX {
                return Err(Error::InvalidInput(format!(
                    "vertex {v} appears twice in the order"
                )));
            }
            rank[v] = i;
        }
        Ok(Order { sequence, rank })
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    pub fn less(&self, u: usize, v: usize) -> bool {
        self.rank[u] < self.rank[v]
    }

    pub fn is_natural(&self) -> bool {
        self.sequence.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Restriction to `set`, renumbered `0..|set|` in increasing id order.
    pub fn restrict(&self, set: VertexSet) -> Order {
        let ids = set.to_vec();
        let mut by_rank: Vec<usize> = (0..ids.len()).collect();
        by_rank.sort_by_key(|&i| self.rank[ids[i]]);
        Order::from_sequence(by_rank).expect("restriction of a linear order")
    }
}

/// A partial design together with a linear order of its vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedPartialDesign {
    pub design: PartialDesign,
    pub order: Order,
}

impl OrderedPartialDesign {
    pub fn natural(design: PartialDesign) -> Self {
        let order = Order::natural(design.n());
        OrderedPartialDesign { design, order }
    }

    pub fn new(design: PartialDesign, order: Order) -> Result<Self> {
        if order.len() != design.n() {
            return Err(Error::InvalidInput(format!(
                "order lists {} vertices, design has {}",
                order.len(),
                design.n()
            )));
        }
        Ok(OrderedPartialDesign { design, order })
    }
}

/// A closure structure expanded by a linear order of its vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderedStructure {
    pub structure: ClosureStructure,
    pub order: Order,
}

impl OrderedStructure {
    pub fn new(structure: ClosureStructure, order: Order) -> Result<Self> {
        if order.len() != structure.n() {
            return Err(Error::InvalidInput(format!(
                "order lists {} vertices, structure has {}",
                order.len(),
                structure.n()
            )));
        }
        Ok(OrderedStructure { structure, order })
    }

    /// Structure with the order `0 < 1 < … < n-1`.
    pub fn natural(design: PartialDesign) -> Result<Self> {
        let order = Order::natural(design.n());
        Ok(OrderedStructure {
            structure: ClosureStructure::new(design)?,
            order,
        })
    }
}

/// Common view of ordered and unordered structures.
pub trait Structure: Sized {
    fn closure_structure(&self) -> &ClosureStructure;

    /// The linear order, for ordered structures.
    fn order(&self) -> Option<&Order>;

    /// Substructure on `set` (assumed closed), renumbered `0..|set|` in
    /// increasing id order.
    fn restrict(&self, set: VertexSet) -> Self;

    /// Renames vertex `v` to `perm[v]`.
    fn relabel(&self, perm: &[usize]) -> Self;

    fn design(&self) -> &PartialDesign {
        self.closure_structure().design()
    }

    fn n(&self) -> usize {
        self.closure_structure().n()
    }

    fn params(&self) -> Params {
        self.closure_structure().params()
    }
}

impl Structure for ClosureStructure {
    fn closure_structure(&self) -> &ClosureStructure {
        self
    }

    fn order(&self) -> Option<&Order> {
        None
    }

    fn restrict(&self, set: VertexSet) -> Self {
        let (design, _) = self.design.induced(set);
        let table = function_table(&design);
        ClosureStructure { design, table }
    }

    fn relabel(&self, perm: &[usize]) -> Self {
        let design = self.design.relabel(perm);
        let table = function_table(&design);
        ClosureStructure { design, table }
    }
}

impl Structure for OrderedStructure {
    fn closure_structure(&self) -> &ClosureStructure {
        &self.structure
    }

    fn order(&self) -> Option<&Order> {
        Some(&self.order)
    }

    fn restrict(&self, set: VertexSet) -> Self {
        OrderedStructure {
            structure: self.structure.restrict(set),
            order: self.order.restrict(set),
        }
    }

    fn relabel(&self, perm: &[usize]) -> Self {
        let sequence = self.order.sequence().iter().map(|&v| perm[v]).collect();
        OrderedStructure {
            structure: self.structure.relabel(perm),
            order: Order::from_sequence(sequence).expect("relabelled order"),
        }
    }
}

/// The structure interpreting an ordered partial design: blocks become the
/// symmetric relation, neighbourhoods the function values, and the order is
/// carried over.
pub fn encode(design: &OrderedPartialDesign) -> Result<OrderedStructure> {
    let structure = ClosureStructure::new(design.design.clone())?;
    OrderedStructure::new(structure, design.order.clone())
}

/// Recovers the ordered partial design from a structure, after checking that
/// its function table is the one the blocks determine.
pub fn decode(structure: &OrderedStructure) -> Result<OrderedPartialDesign> {
    structure.structure.check_consistency()?;
    OrderedPartialDesign::new(structure.structure.design.clone(), structure.order.clone())
}
