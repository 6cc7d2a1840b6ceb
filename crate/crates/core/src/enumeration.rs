//! Isomorphism-free generation of small partial designs, completion search
//! on a fixed vertex set, and the divisibility conditions.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::morphisms::{automorphism_count, canonical_form};
use crate::structures::{binomial, ClosureStructure, Params, PartialDesign};
#[cfg(test)]
use crate::Error;
use crate::{Budget, NodeCounter, Result, VertexSet};

/// One representative per isomorphism class of partial designs on `n`
/// vertices.
#[derive(Clone, Debug)]
pub struct EnumerationCensus {
    pub params: Params,
    pub n: usize,
    /// Canonically labelled representatives, sorted by canonical form.
    pub structures: Vec<PartialDesign>,
    /// Canonical form bytes, parallel to `structures` (hence sorted).
    pub forms: Vec<Vec<u8>>,
    /// Automorphism group orders, parallel to `structures`.
    pub automorphisms: Vec<u128>,
}

impl EnumerationCensus {
    pub fn classes(&self) -> usize {
        self.structures.len()
    }

    /// Number of labelled designs: the sum of `n!/|Aut|` over the classes.
    pub fn labeled(&self) -> u128 {
        let fact: u128 = (1..=self.n as u128).product();
        self.automorphisms.iter().map(|a| fact / a).sum()
    }

    /// The sub-census of complete designs.
    pub fn complete_only(&self) -> EnumerationCensus {
        let keep: Vec<usize> = (0..self.classes())
            .filter(|&i| self.structures[i].is_complete_design().unwrap_or(false))
            .collect();
        EnumerationCensus {
            params: self.params,
            n: self.n,
            structures: keep.iter().map(|&i| self.structures[i].clone()).collect(),
            forms: keep.iter().map(|&i| self.forms[i].clone()).collect(),
            automorphisms: keep.iter().map(|&i| self.automorphisms[i]).collect(),
        }
    }
}

/// All partial designs on `n` vertices up to isomorphism.
///
/// Generated level by level in the number of blocks: every class with
/// `b + 1` blocks arises from a class with `b` blocks by adding one block, and
/// children are kept only when their canonical form is new. The budget
/// counts canonical-form computations.
pub fn enumerate_partial_designs(
    params: Params,
    n: usize,
    budget: Budget,
) -> Result<EnumerationCensus> {
    let root = PartialDesign::empty(params, n)?;
    enumerate_from(vec![root], params, n, budget)
}

/// Census grown from the given seeds (all on `n` vertices) by block additions.
pub fn enumerate_from(
    seeds: Vec<PartialDesign>,
    params: Params,
    n: usize,
    budget: Budget,
) -> Result<EnumerationCensus> {
    let mut counter = budget.counter();
    let mut all: BTreeMap<Vec<u8>, PartialDesign> = BTreeMap::new();
    let mut level: BTreeMap<Vec<u8>, PartialDesign> = BTreeMap::new();
    for seed in seeds {
        counter.tick()?;
        let (form, canon) = canonize(seed)?;
        level.entry(form).or_insert(canon);
    }
    let ksets: Vec<VertexSet> = VertexSet::full(n).subsets(params.k()).collect();
    while !level.is_empty() {
        let mut children: Vec<(&PartialDesign, VertexSet)> = Vec::new();
        for d in level.values() {
            let mult = multiplicities(d);
            for &b in &ksets {
                if !d.has_block(b)
                    && b.subsets(params.t())
                        .all(|ts| mult.get(&ts).copied().unwrap_or(0) < params.lambda())
                {
                    counter.tick()?;
                    children.push((d, b));
                }
            }
        }
        let canon: Vec<(Vec<u8>, PartialDesign)> = children
            .par_iter()
            .map(|(d, b)| {
                let child = d.with_block(*b).expect("admissible block");
                canonize(child)
            })
            .collect::<Result<_>>()?;
        let mut next = BTreeMap::new();
        for (form, d) in canon {
            if !all.contains_key(&form) && !level.contains_key(&form) {
                next.entry(form).or_insert(d);
            }
        }
        all.append(&mut level);
        level = next;
    }
    let (forms, structures): (Vec<_>, Vec<_>) = all.into_iter().unzip();
    let automorphisms = structures
        .par_iter()
        .map(|d| automorphism_count(&ClosureStructure::new(d.clone()).expect("valid")))
        .collect();
    Ok(EnumerationCensus {
        params,
        n,
        structures,
        forms,
        automorphisms,
    })
}

fn canonize(d: PartialDesign) -> Result<(Vec<u8>, PartialDesign)> {
    let cs = ClosureStructure::new(d)?;
    let form = canonical_form(&cs)?;
    let canon = cs.design().relabel(form.labeling());
    Ok((form.as_bytes().to_vec(), canon))
}

fn multiplicities(d: &PartialDesign) -> HashMap<VertexSet, usize> {
    let mut mult = HashMap::new();
    for b in d.blocks() {
        for ts in b.subsets(d.params().t()) {
            *mult.entry(ts).or_insert(0) += 1;
        }
    }
    mult
}

/// A test of whether a complete design on `n` points may exist.
pub trait Admissibility {
    fn admissible(&self, params: Params, n: usize) -> bool;
}

/// The standard divisibility conditions: `C(k-i, t-i)` divides
/// `λ·C(n-i, t-i)` for every `0 ≤ i < t`.
#[derive(Copy, Clone, Debug, Default)]
pub struct Divisibility;

impl Admissibility for Divisibility {
    fn admissible(&self, params: Params, n: usize) -> bool {
        divisibility_admissible(params, n)
    }
}

impl<F: Fn(Params, usize) -> bool> Admissibility for F {
    fn admissible(&self, params: Params, n: usize) -> bool {
        self(params, n)
    }
}

pub fn divisibility_admissible(params: Params, n: usize) -> bool {
    let (k, t, lambda) = (params.k(), params.t(), params.lambda() as u128);
    (0..t).all(|i| {
        let available = if n >= i { binomial(n - i, t - i) } else { 0 };
        (lambda * available) % binomial(k - i, t - i) == 0
    })
}

/// Backtracking search for completions of a partial design on its own vertex
/// set.
///
/// At each node the uncovered `t`-set with the fewest candidate blocks is
/// chosen, and the search branches on which candidate is the smallest new
/// block through it (candidates in lexicographic order). Candidates passed
/// over are forbidden below that branch, so every completion is reached
/// exactly once.
pub struct CompletionSearch {
    base: PartialDesign,
    lambda: usize,
    tsets: Vec<VertexSet>,
    /// Candidate blocks (k-sets not already blocks), lexicographic.
    ksets: Vec<VertexSet>,
    /// t-set indices of each candidate.
    kset_tsets: Vec<Vec<usize>>,
    /// Candidate indices through each t-set, lexicographic.
    tset_ksets: Vec<Vec<usize>>,
    initial: Vec<usize>,
}

struct SearchState {
    count: Vec<usize>,
    forbidden: Vec<u32>,
    chosen: Vec<usize>,
}

impl CompletionSearch {
    pub fn new(partial: &PartialDesign) -> Result<Self> {
        partial.ensure_valid()?;
        let p = partial.params();
        let universe = partial.universe();
        let tsets: Vec<VertexSet> = universe.subsets(p.t()).collect();
        let index: HashMap<VertexSet, usize> =
            tsets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let ksets: Vec<VertexSet> = universe
            .subsets(p.k())
            .filter(|b| !partial.has_block(*b))
            .collect();
        let kset_tsets: Vec<Vec<usize>> = ksets
            .iter()
            .map(|b| b.subsets(p.t()).map(|ts| index[&ts]).collect())
            .collect();
        let mut tset_ksets = vec![Vec::new(); tsets.len()];
        for (ki, ts) in kset_tsets.iter().enumerate() {
            for &ti in ts {
                tset_ksets[ti].push(ki);
            }
        }
        let mut initial = vec![0; tsets.len()];
        for b in partial.blocks() {
            for ts in b.subsets(p.t()) {
                initial[index[&ts]] += 1;
            }
        }
        Ok(CompletionSearch {
            base: partial.clone(),
            lambda: p.lambda(),
            tsets,
            ksets,
            kset_tsets,
            tset_ksets,
            initial,
        })
    }

    /// First completion in search order.
    pub fn first(&self, budget: Budget) -> Result<Option<PartialDesign>> {
        let mut found = None;
        self.run(budget, &mut |chosen| {
            found = Some(self.design_with(chosen));
            false
        })?;
        Ok(found)
    }

    pub fn count(&self, budget: Budget) -> Result<u64> {
        let mut n = 0u64;
        self.run(budget, &mut |_| {
            n += 1;
            true
        })?;
        Ok(n)
    }

    pub fn all(&self, budget: Budget) -> Result<Vec<PartialDesign>> {
        let mut out = Vec::new();
        self.run(budget, &mut |chosen| {
            out.push(self.design_with(chosen));
            true
        })?;
        out.sort();
        Ok(out)
    }

    fn design_with(&self, chosen: &[usize]) -> PartialDesign {
        let blocks = self
            .base
            .blocks()
            .iter()
            .copied()
            .chain(chosen.iter().map(|&i| self.ksets[i]));
        PartialDesign::unchecked(self.base.params(), self.base.n(), blocks).expect("same universe")
    }

    /// Runs the search; `on_solution` returns whether to continue.
    fn run(&self, budget: Budget, on_solution: &mut dyn FnMut(&[usize]) -> bool) -> Result<u64> {
        let mut state = SearchState {
            count: self.initial.clone(),
            forbidden: vec![0; self.ksets.len()],
            chosen: Vec::new(),
        };
        let mut counter = budget.counter();
        self.step(&mut state, &mut counter, on_solution)?;
        Ok(counter.used())
    }

    fn available(&self, state: &SearchState, ki: usize) -> bool {
        state.forbidden[ki] == 0
            && !state.chosen.contains(&ki)
            && self.kset_tsets[ki]
                .iter()
                .all(|&ti| state.count[ti] < self.lambda)
    }

    /// Returns Ok(false) once the callback asks to stop.
    fn step(
        &self,
        state: &mut SearchState,
        counter: &mut NodeCounter,
        on_solution: &mut dyn FnMut(&[usize]) -> bool,
    ) -> Result<bool> {
        counter.tick()?;
        // fail-first: the deficient t-set with the fewest candidates
        let mut pick: Option<(usize, Vec<usize>)> = None;
        for ti in 0..self.tsets.len() {
            let deficit = self.lambda - state.count[ti];
            if deficit == 0 {
                continue;
            }
            let cands: Vec<usize> = self.tset_ksets[ti]
                .iter()
                .copied()
                .filter(|&ki| self.available(state, ki))
                .collect();
            if cands.len() < deficit {
                return Ok(true);
            }
            if pick.as_ref().is_none_or(|(_, c)| cands.len() < c.len()) {
                pick = Some((ti, cands));
            }
        }
        let Some((_, cands)) = pick else {
            return Ok(on_solution(&state.chosen));
        };
        for (i, &ki) in cands.iter().enumerate() {
            state.chosen.push(ki);
            for &ti in &self.kset_tsets[ki] {
                state.count[ti] += 1;
            }
            let keep_going = self.step(state, counter, on_solution);
            for &ti in &self.kset_tsets[ki] {
                state.count[ti] -= 1;
            }
            state.chosen.pop();
            if !keep_going? {
                for &prev in &cands[..i] {
                    state.forbidden[prev] -= 1;
                }
                return Ok(false);
            }
            state.forbidden[ki] += 1;
        }
        for &ki in &cands {
            state.forbidden[ki] -= 1;
        }
        Ok(true)
    }
}

/// A completion of `partial` on the same vertex set, if one exists.
pub fn complete_design(partial: &PartialDesign) -> Result<Option<PartialDesign>> {
    CompletionSearch::new(partial)?.first(Budget::UNLIMITED)
}

/// Number of labelled completions of `partial` on the same vertex set.
pub fn count_completions(partial: &PartialDesign, budget: Budget) -> Result<u64> {
    CompletionSearch::new(partial)?.count(budget)
}

pub fn all_completions(partial: &PartialDesign, budget: Budget) -> Result<Vec<PartialDesign>> {
    CompletionSearch::new(partial)?.all(budget)
}

/// Tries to complete `partial` on `n, n+1, …, max_n` vertices (adding
/// isolated vertices), skipping sizes the admissibility test rules out.
pub fn complete_design_growing(
    partial: &PartialDesign,
    max_n: usize,
    admissibility: &dyn Admissibility,
    budget: Budget,
) -> Result<Option<PartialDesign>> {
    partial.ensure_valid()?;
    for n in partial.n()..=max_n {
        if !admissibility.admissible(partial.params(), n) {
            continue;
        }
        let grown = partial.with_extra_vertices(n - partial.n())?;
        if let Some(done) = CompletionSearch::new(&grown)?.first(budget)? {
            return Ok(Some(done));
        }
    }
    Ok(None)
}
