//! Partial designs and their encoding as structures with neighbourhood
//! functions.

mod encoding;
pub mod format;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::{Error, Result, VertexSet, MAX_VERTICES};

pub use encoding::{
    decode, encode, ClosureStructure, Order, OrderedPartialDesign, OrderedStructure, Structure,
};

/// Design parameters `k` (block size), `t` (strength) and `λ` (multiplicity
/// bound), together with the largest possible neighbourhood size
/// `K = (k - t)·λ + t`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params {
    k: usize,
    t: usize,
    lambda: usize,
    max_neighborhood: usize,
}

impl Params {
    pub fn new(k: usize, t: usize, lambda: usize) -> Result<Self> {
        if t < 2 || k < t || lambda < 1 || k > MAX_VERTICES {
            return Err(Error::Parameter { k, t, lambda });
        }
        Ok(Params {
            k,
            t,
            lambda,
            max_neighborhood: (k - t) * lambda + t,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    /// `K`, the largest index of a neighbourhood function.
    pub fn max_neighborhood(&self) -> usize {
        self.max_neighborhood
    }

    /// Neighbourhood sizes that carry a function symbol: `k..=K`.
    pub fn function_sizes(&self) -> std::ops::RangeInclusive<usize> {
        self.k..=self.max_neighborhood
    }
}

/// Shorthand for [`Params::new`].
pub fn make_params(k: usize, t: usize, lambda: usize) -> Result<Params> {
    Params::new(k, t, lambda)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// A block does not have exactly `k` distinct vertices.
    BlockSize,
    /// A block uses a vertex outside `0..n`.
    VertexRange,
    /// A `t`-subset lies in more than `λ` blocks.
    Multiplicity,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::BlockSize => "block-size",
            Rule::VertexRange => "vertex-range",
            Rule::Multiplicity => "multiplicity",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub subset: VertexSet,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} {{{}}}", v.rule.as_str(), v.subset)?;
        }
        Ok(())
    }
}

/// A hypergraph on `0..n` whose blocks are `k`-sets, each `t`-set lying in at
/// most `λ` of them.
///
/// [`PartialDesign::new`] only admits valid designs. [`PartialDesign::unchecked`]
/// keeps whatever it is given so that [`PartialDesign::validate`] can report
/// the problems; operations that need a valid design check first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialDesign {
    params: Params,
    n: usize,
    blocks: BTreeSet<VertexSet>,
}

impl PartialDesign {
    pub fn new<I, B>(params: Params, n: usize, blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = B>,
        B: IntoIterator<Item = usize>,
    {
        let design = Self::unchecked(params, n, blocks)?;
        design.ensure_valid()?;
        Ok(design)
    }

    /// Builds a design without checking block sizes or multiplicities.
    ///
    /// Fails only when the input cannot be represented at all: more than
    /// [`MAX_VERTICES`] vertices. Repeated vertices inside a block collapse,
    /// which [`validate`](Self::validate) then reports as a block-size
    /// violation.
    pub fn unchecked<I, B>(params: Params, n: usize, blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = B>,
        B: IntoIterator<Item = usize>,
    {
        if n > MAX_VERTICES {
            return Err(Error::UniverseTooLarge {
                n,
                max: MAX_VERTICES,
            });
        }
        let mut set = BTreeSet::new();
        for block in blocks {
            let mut b = VertexSet::EMPTY;
            for v in block {
                if v >= MAX_VERTICES {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                b.insert(v);
            }
            set.insert(b);
        }
        Ok(PartialDesign {
            params,
            n,
            blocks: set,
        })
    }

    pub fn empty(params: Params, n: usize) -> Result<Self> {
        Self::new(params, n, std::iter::empty::<VertexSet>())
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn universe(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn blocks(&self) -> &BTreeSet<VertexSet> {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn has_block(&self, block: VertexSet) -> bool {
        self.blocks.contains(&block)
    }

    pub fn validate(&self) -> ValidationReport {
        let Params { k, t, lambda, .. } = self.params;
        let universe = self.universe();
        let mut violations = Vec::new();
        for &b in &self.blocks {
            if b.len() != k {
                violations.push(Violation {
                    rule: Rule::BlockSize,
                    subset: b,
                });
            }
            if !b.is_subset(universe) {
                violations.push(Violation {
                    rule: Rule::VertexRange,
                    subset: b,
                });
            }
        }
        let mut counts: HashMap<VertexSet, usize> = HashMap::new();
        for &b in &self.blocks {
            for ts in b.subsets(t) {
                *counts.entry(ts).or_default() += 1;
            }
        }
        let mut over: Vec<VertexSet> = counts
            .into_iter()
            .filter(|&(_, c)| c > lambda)
            .map(|(ts, _)| ts)
            .collect();
        over.sort();
        violations.extend(over.into_iter().map(|subset| Violation {
            rule: Rule::Multiplicity,
            subset,
        }));
        ValidationReport { violations }
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.ok() {
            Ok(())
        } else {
            Err(Error::InvalidDesign(report))
        }
    }

    /// Number of blocks containing `tset`.
    pub fn multiplicity(&self, tset: VertexSet) -> usize {
        self.blocks.iter().filter(|b| tset.is_subset(**b)).count()
    }

    /// Whether every `t`-subset of the universe lies in exactly `λ` blocks.
    pub fn is_complete_design(&self) -> Result<bool> {
        self.ensure_valid()?;
        let t = self.params.t;
        let lambda = self.params.lambda;
        let mut counts: HashMap<VertexSet, usize> = HashMap::new();
        for &b in &self.blocks {
            for ts in b.subsets(t) {
                *counts.entry(ts).or_default() += 1;
            }
        }
        // valid, so every count is <= lambda; need every t-set present with count lambda
        let total = binomial(self.n, t);
        let full = counts.values().filter(|&&c| c == lambda).count() as u128;
        Ok(full == total)
    }

    /// All vertices lying in a block together with the whole of `tset`.
    ///
    /// For a covered `t`-set the result contains `tset` itself.
    pub fn neighborhood(&self, tset: VertexSet) -> Result<VertexSet> {
        self.check_tset(tset)?;
        Ok(self.neighborhood_unchecked(tset))
    }

    pub(crate) fn neighborhood_unchecked(&self, tset: VertexSet) -> VertexSet {
        self.blocks
            .iter()
            .filter(|b| tset.is_subset(**b))
            .fold(VertexSet::EMPTY, |acc, b| acc.union(*b))
    }

    pub(crate) fn check_tset(&self, tset: VertexSet) -> Result<()> {
        if tset.len() != self.params.t {
            return Err(Error::Arity {
                expected: self.params.t,
                found: tset.len(),
            });
        }
        self.check_subset(tset)
    }

    pub(crate) fn check_subset(&self, set: VertexSet) -> Result<()> {
        match set.difference(self.universe()).min() {
            Some(vertex) => Err(Error::VertexOutOfRange { vertex, n: self.n }),
            None => Ok(()),
        }
    }

    /// The design with `block` added, if it stays valid.
    pub fn with_block(&self, block: VertexSet) -> Result<Self> {
        let mut next = self.clone();
        next.blocks.insert(block);
        next.ensure_valid()?;
        Ok(next)
    }

    /// The same blocks on a universe with `extra` additional isolated vertices.
    pub fn with_extra_vertices(&self, extra: usize) -> Result<Self> {
        let n = self.n + extra;
        if n > MAX_VERTICES {
            return Err(Error::UniverseTooLarge {
                n,
                max: MAX_VERTICES,
            });
        }
        Ok(PartialDesign {
            params: self.params,
            n,
            blocks: self.blocks.clone(),
        })
    }

    /// Renames vertex `v` to `perm[v]`. `perm` must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.n);
        PartialDesign {
            params: self.params,
            n: self.n,
            blocks: self.blocks.iter().map(|b| b.map(perm)).collect(),
        }
    }

    /// The blocks inside `set`, with the vertices of `set` renumbered
    /// `0..|set|` in increasing order. Also returns the inclusion map.
    pub fn induced(&self, set: VertexSet) -> (Self, Vec<usize>) {
        let inclusion = set.to_vec();
        let mut new_id = vec![usize::MAX; self.n.max(set.max().map_or(0, |m| m + 1))];
        for (i, &v) in inclusion.iter().enumerate() {
            new_id[v] = i;
        }
        let blocks = self
            .blocks
            .iter()
            .filter(|b| b.is_subset(set))
            .map(|b| b.map(&new_id))
            .collect();
        (
            PartialDesign {
                params: self.params,
                n: inclusion.len(),
                blocks,
            },
            inclusion,
        )
    }
}

pub(crate) fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub const FANO_BLOCKS: [[usize; 3]; 7] = [
        [0, 1, 2],
        [0, 3, 4],
        [0, 5, 6],
        [1, 3, 5],
        [1, 4, 6],
        [2, 3, 6],
        [2, 4, 5],
    ];

    pub fn sts() -> Params {
        Params::new(3, 2, 1).unwrap()
    }

    pub fn fano() -> PartialDesign {
        PartialDesign::new(sts(), 7, FANO_BLOCKS).unwrap()
    }

    pub fn design(params: Params, n: usize, blocks: &[&[usize]]) -> PartialDesign {
        PartialDesign::new(params, n, blocks.iter().map(|b| b.iter().copied())).unwrap()
    }

    pub fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }
}
