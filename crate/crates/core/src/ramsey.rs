//! Free orderings and exhaustive checking of arrow statements `C → (B)^A_r`.
//!
//! `C → (B)^A_r` holds when every colouring of the copies of `A` in `C` with
//! `r` colours leaves some copy of `B` in `C` whose copies of `A` all share a
//! colour. Copies are closed vertex sets (see [`crate::morphisms`]); for
//! ordered structures these are in bijection with embeddings.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::enumeration::enumerate_partial_designs;
use crate::morphisms::{canonical_form, enumerate_copies, Copy};
use crate::structures::{ClosureStructure, Order, OrderedStructure};
use crate::{Budget, Error, Result};

/// All `n!` orderings of `s`, in lexicographic order of their sequences.
pub fn orderings(s: &ClosureStructure, budget: Budget) -> Result<Vec<OrderedStructure>> {
    let count: u128 = (1..=s.n() as u128).product();
    if count > budget.0 as u128 {
        return Err(Error::BudgetExceeded { limit: budget.0 });
    }
    (0..s.n())
        .permutations(s.n())
        .map(|seq| OrderedStructure::new(s.clone(), Order::from_sequence(seq)?))
        .collect()
}

/// One ordering per order-isomorphism class, in order of first appearance
/// among [`orderings`].
pub fn distinct_orderings(s: &ClosureStructure, budget: Budget) -> Result<Vec<OrderedStructure>> {
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for o in orderings(s, budget)? {
        let form = canonical_form(&o)?.as_bytes().to_vec();
        if seen.insert(form, ()).is_none() {
            out.push(o);
        }
    }
    Ok(out)
}

/// The data of an arrow question: host `C`, target `B`, coloured pattern `A`
/// and number of colours, with the copies of `A` and `B` in `C`.
#[derive(Clone, Debug)]
pub struct ArrowInstance {
    pub c: OrderedStructure,
    pub b: OrderedStructure,
    pub a: OrderedStructure,
    pub r: usize,
    pub copies_of_a: Vec<Copy>,
    pub copies_of_b: Vec<Copy>,
    /// For each copy of `B`, the indices of the copies of `A` inside it.
    pub members: Vec<Vec<usize>>,
}

impl ArrowInstance {
    pub fn new(
        c: OrderedStructure,
        b: OrderedStructure,
        a: OrderedStructure,
        r: usize,
    ) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidInput("need at least one colour".into()));
        }
        if a.structure.params() != c.structure.params()
            || b.structure.params() != c.structure.params()
        {
            return Err(Error::InvalidInput(
                "structures have different parameters".into(),
            ));
        }
        let copies_of_a = enumerate_copies(&a, &c);
        let copies_of_b = enumerate_copies(&b, &c);
        // a copy of A inside a closed copy of B is closed in it, and conversely
        let members = copies_of_b
            .iter()
            .map(|cb| {
                copies_of_a
                    .iter()
                    .positions(|ca| ca.vertices.is_subset(cb.vertices))
                    .collect()
            })
            .collect();
        Ok(ArrowInstance {
            c,
            b,
            a,
            r,
            copies_of_a,
            copies_of_b,
            members,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowVerdict {
    pub holds: bool,
    /// When the statement fails: a colour for each copy of `A` (by index)
    /// with no monochromatic copy of `B`.
    pub witness: Option<Vec<usize>>,
    /// Search nodes visited.
    pub nodes: u64,
}

/// Index of a copy of `B` whose copies of `A` all have one colour under
/// `coloring`.
pub fn find_mono_copy(inst: &ArrowInstance, coloring: &[usize]) -> Option<usize> {
    inst.members
        .iter()
        .position(|m| m.iter().map(|&i| coloring[i]).all_equal())
}

/// Decides `C → (B)^A_r` by searching for a colouring with no monochromatic
/// copy of `B`.
///
/// Colourings are enumerated as restricted growth strings (each copy gets an
/// already used colour or the next unused one), which visits one colouring
/// per orbit of colour permutations, with the first copy fixed to colour 0. A
/// branch is cut as soon as some copy of `B` has all of its copies of `A`
/// coloured alike. The witness is the lexicographically least bad colouring.
pub fn arrow_check(
    c: &OrderedStructure,
    b: &OrderedStructure,
    a: &OrderedStructure,
    r: usize,
    budget: Budget,
) -> Result<ArrowVerdict> {
    let inst = ArrowInstance::new(c.clone(), b.clone(), a.clone(), r)?;
    check_instance(&inst, budget)
}

pub fn check_instance(inst: &ArrowInstance, budget: Budget) -> Result<ArrowVerdict> {
    let m = inst.copies_of_a.len();
    if m == 0 && !inst.copies_of_b.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if inst.copies_of_b.is_empty() {
        return Ok(ArrowVerdict {
            holds: false,
            witness: Some(vec![0; m]),
            nodes: 0,
        });
    }
    if inst.members.iter().any(|mem| mem.is_empty()) {
        return Ok(ArrowVerdict {
            holds: true,
            witness: None,
            nodes: 0,
        });
    }
    // copies of B, grouped by the last copy of A they contain
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (bi, mem) in inst.members.iter().enumerate() {
        closing[*mem.iter().max().expect("non-empty")].push(bi);
    }
    let mut search = Search {
        inst,
        closing,
        coloring: vec![0; m],
        counter: budget.counter(),
    };
    let bad = search.extend(0, 0)?;
    let nodes = search.counter.used();
    Ok(ArrowVerdict {
        holds: !bad,
        witness: bad.then(|| search.coloring.clone()),
        nodes,
    })
}

struct Search<'a> {
    inst: &'a ArrowInstance,
    closing: Vec<Vec<usize>>,
    coloring: Vec<usize>,
    counter: crate::NodeCounter,
}

impl Search<'_> {
    /// Colours copies `i..`; returns whether a bad colouring was completed
    /// (left in `self.coloring`).
    fn extend(&mut self, i: usize, used: usize) -> Result<bool> {
        if i == self.coloring.len() {
            return Ok(true);
        }
        let top = used.min(self.inst.r - 1);
        for color in 0..=top {
            self.counter.tick()?;
            self.coloring[i] = color;
            let mono = self.closing[i].iter().any(|&bi| {
                self.inst.members[bi]
                    .iter()
                    .all(|&j| self.coloring[j] == color)
            });
            if mono {
                continue;
            }
            if self.extend(i + 1, used.max(color + 1))? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Reference decision procedure: tries all `r^m` colourings in lexicographic
/// order with [`find_mono_copy`].
pub fn check_instance_naive(inst: &ArrowInstance, budget: Budget) -> Result<ArrowVerdict> {
    let m = inst.copies_of_a.len();
    if m == 0 && !inst.copies_of_b.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let mut counter = budget.counter();
    let mut coloring = vec![0; m];
    loop {
        counter.tick()?;
        if find_mono_copy(inst, &coloring).is_none() {
            return Ok(ArrowVerdict {
                holds: false,
                witness: Some(coloring),
                nodes: counter.used(),
            });
        }
        // next colouring in lexicographic order
        let mut i = m;
        loop {
            if i == 0 {
                return Ok(ArrowVerdict {
                    holds: true,
                    witness: None,
                    nodes: counter.used(),
                });
            }
            i -= 1;
            coloring[i] += 1;
            if coloring[i] < inst.r {
                break;
            }
            coloring[i] = 0;
        }
    }
}

/// Smallest host among ordered partial designs with at most `max_n` vertices
/// for which `C → (B)^A_r` holds, trying sizes in increasing order, classes
/// in canonical order and orderings in lexicographic order.
pub fn search_witness(
    b: &OrderedStructure,
    a: &OrderedStructure,
    r: usize,
    max_n: usize,
    budget: Budget,
) -> Result<Option<OrderedStructure>> {
    let params = b.structure.params();
    for n in b.structure.n()..=max_n {
        for d in enumerate_partial_designs(params, n, budget)?.structures {
            for c in distinct_orderings(&ClosureStructure::new(d)?, budget)? {
                match arrow_check(&c, b, a, r, budget) {
                    Ok(v) if v.holds => return Ok(Some(c)),
                    Ok(_) | Err(Error::EmptyPattern) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(None)
}
