//! Free amalgamation over closed substructures and exhaustive checks of the
//! amalgamation-class axioms.
//!
//! Given embeddings `α1: A → B1` and `α2: A → B2` with closed images, the free
//! amalgam glues `B1` and `B2` along the images of `A` and adds nothing else:
//! no block uses both a vertex of `B1 ∖ α1(A)` and one of `B2 ∖ α2(A)`.
//! Because the images are closed, every `t`-set that could see blocks from
//! both sides lies inside `A`, so the `λ` bound and all function values carry
//! over unchanged.

use rayon::prelude::*;

use crate::enumeration::enumerate_partial_designs;
use crate::morphisms::{
    canonical_form, check_embedding, closure_of, diagnose_embedding, enumerate_embeddings,
    is_closed, EmbeddingFailure,
};
use crate::structures::{
    ClosureStructure, Order, OrderedStructure, Params, PartialDesign, Structure,
};
use crate::{Budget, Error, Result, VertexSet};

#[derive(Clone, Debug)]
pub struct AmalgamProblem<S> {
    pub a: S,
    pub b1: S,
    pub b2: S,
    pub alpha1: Vec<usize>,
    pub alpha2: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Amalgam<S> {
    pub c: S,
    pub beta1: Vec<usize>,
    pub beta2: Vec<usize>,
}

/// Structures that can be freely amalgamated.
pub trait Amalgamate: Structure + Clone {
    /// The structure with no vertices.
    fn empty(params: Params) -> Result<Self>;

    /// Builds the amalgam from the glued design.
    fn assemble(
        design: PartialDesign,
        problem: &AmalgamProblem<Self>,
        beta1: &[usize],
        beta2: &[usize],
    ) -> Result<Self>;
}

impl Amalgamate for ClosureStructure {
    fn empty(params: Params) -> Result<Self> {
        ClosureStructure::new(PartialDesign::empty(params, 0)?)
    }

    fn assemble(
        design: PartialDesign,
        _problem: &AmalgamProblem<Self>,
        _beta1: &[usize],
        _beta2: &[usize],
    ) -> Result<Self> {
        ClosureStructure::new(design)
    }
}

impl Amalgamate for OrderedStructure {
    fn empty(params: Params) -> Result<Self> {
        OrderedStructure::natural(PartialDesign::empty(params, 0)?)
    }

    /// `C` is ordered like `B1`, with each vertex of `B2 ∖ α2(A)` placed right
    /// after the image of its nearest predecessor from `α2(A)` in `B2` (or at
    /// the front when it has none); vertices sharing a predecessor keep their
    /// order from `B2`.
    fn assemble(
        design: PartialDesign,
        p: &AmalgamProblem<Self>,
        beta1: &[usize],
        beta2: &[usize],
    ) -> Result<Self> {
        let base2: VertexSet = p.alpha2.iter().copied().collect();
        let n1 = p.b1.n();
        // new B2 vertices grouped by the C-vertex they follow (None = front)
        let mut after: Vec<Vec<usize>> = vec![Vec::new(); n1];
        let mut front = Vec::new();
        let mut pred: Option<usize> = None;
        for &y in p.b2.order.sequence() {
            if base2.contains(y) {
                pred = Some(beta2[y]);
            } else {
                match pred {
                    Some(x) => after[x].push(beta2[y]),
                    None => front.push(beta2[y]),
                }
            }
        }
        let mut sequence = front;
        for &x in p.b1.order.sequence() {
            sequence.push(beta1[x]);
            sequence.extend_from_slice(&after[beta1[x]]);
        }
        OrderedStructure::new(
            ClosureStructure::new(design)?,
            Order::from_sequence(sequence)?,
        )
    }
}

/// Glues `B1` and `B2` along `A` without checking anything.
///
/// Vertices of `B1` keep their ids; vertices of `B2 ∖ α2(A)` follow in
/// increasing id order. Returns the (possibly invalid) design and `β1`, `β2`.
pub fn glue_unchecked<S: Structure>(
    p: &AmalgamProblem<S>,
) -> Result<(PartialDesign, Vec<usize>, Vec<usize>)> {
    let n1 = p.b1.n();
    let n2 = p.b2.n();
    let beta1: Vec<usize> = (0..n1).collect();
    let mut beta2 = vec![usize::MAX; n2];
    for (x, &y) in p.alpha2.iter().enumerate() {
        beta2[y] = p.alpha1[x];
    }
    let mut next = n1;
    for slot in beta2.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let blocks =
        p.b1.design()
            .blocks()
            .iter()
            .copied()
            .chain(p.b2.design().blocks().iter().map(|b| b.map(&beta2)));
    let design = PartialDesign::unchecked(p.b1.params(), next, blocks)?;
    Ok((design, beta1, beta2))
}

fn check_alpha<S: Structure>(alpha: &[usize], a: &S, b: &S, side: &'static str) -> Result<()> {
    let invalid = |e: EmbeddingFailure| Error::InvalidInput(format!("{side}: {e}"));
    match diagnose_embedding(alpha, a, b) {
        Ok(()) => Ok(()),
        Err(
            e @ (EmbeddingFailure::DomainSize { .. }
            | EmbeddingFailure::LanguageMismatch
            | EmbeddingFailure::OutOfRange { .. }
            | EmbeddingFailure::NotInjective { .. }),
        ) => Err(invalid(e)),
        Err(e) => {
            if is_closed(b, alpha.iter().copied().collect()) {
                Err(invalid(e))
            } else {
                Err(Error::NotClosed { side })
            }
        }
    }
}

/// The free amalgam of `B1` and `B2` over `A`.
pub fn free_amalgam<S: Amalgamate>(p: &AmalgamProblem<S>) -> Result<Amalgam<S>> {
    for (name, s) in [("A", &p.a), ("B1", &p.b1), ("B2", &p.b2)] {
        let report = s.design().validate();
        if !report.ok() {
            return Err(Error::InvalidInput(format!(
                "{name} is not a partial design: {report}"
            )));
        }
    }
    check_alpha(&p.alpha1, &p.a, &p.b1, "B1")?;
    check_alpha(&p.alpha2, &p.a, &p.b2, "B2")?;
    let (design, beta1, beta2) = glue_unchecked(p)?;
    let c = S::assemble(design, p, &beta1, &beta2)?;
    Ok(Amalgam { c, beta1, beta2 })
}

/// Free amalgam over the empty structure: the disjoint union.
pub fn joint_embedding<S: Amalgamate>(b1: &S, b2: &S) -> Result<Amalgam<S>> {
    if b1.params() != b2.params() {
        return Err(Error::InvalidInput(
            "structures have different parameters".into(),
        ));
    }
    let p = AmalgamProblem {
        a: S::empty(b1.params())?,
        b1: b1.clone(),
        b2: b2.clone(),
        alpha1: Vec::new(),
        alpha2: Vec::new(),
    };
    free_amalgam(&p)
}

/// The conditions an amalgam is checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamCertificate {
    /// `C` is a valid partial design.
    pub valid: bool,
    pub beta1_embedding: bool,
    pub beta2_embedding: bool,
    /// `β1 ∘ α1 = β2 ∘ α2`.
    pub commutes: bool,
    /// `β1(B1) ∩ β2(B2) = β1(α1(A))` and no block meets both new parts.
    pub free: bool,
    /// `β1(B1)` and `β2(B2)` are closed in `C`.
    pub images_closed: bool,
    /// Every function value of `B1` and `B2` is a function value of `C`.
    pub functions_inherited: bool,
}

impl AmalgamCertificate {
    pub fn holds(&self) -> bool {
        self.entries().iter().all(|(_, ok)| *ok)
    }

    pub fn entries(&self) -> [(&'static str, bool); 7] {
        [
            ("valid", self.valid),
            ("beta1-embedding", self.beta1_embedding),
            ("beta2-embedding", self.beta2_embedding),
            ("commutes", self.commutes),
            ("free", self.free),
            ("images-closed", self.images_closed),
            ("functions-inherited", self.functions_inherited),
        ]
    }
}

pub fn verify_amalgam<S: Structure>(p: &AmalgamProblem<S>, m: &Amalgam<S>) -> AmalgamCertificate {
    let c = m.c.closure_structure();
    let img1: VertexSet = m.beta1.iter().copied().collect();
    let img2: VertexSet = m.beta2.iter().copied().collect();
    let base: VertexSet = p.alpha1.iter().map(|&x| m.beta1[x]).collect();
    let new1 = img1.difference(base);
    let new2 = img2.difference(base);
    let commutes = p.alpha1.len() == p.alpha2.len()
        && p.alpha1
            .iter()
            .zip(&p.alpha2)
            .all(|(&y1, &y2)| m.beta1[y1] == m.beta2[y2]);
    let free = img1.intersection(img2) == base
        && c.design()
            .blocks()
            .iter()
            .all(|b| b.intersection(new1).is_empty() || b.intersection(new2).is_empty());
    let inherited = |b: &S, beta: &[usize]| {
        b.closure_structure()
            .table()
            .iter()
            .all(|(ts, nb)| c.neighborhood(ts.map(beta)) == nb.map(beta))
    };
    AmalgamCertificate {
        valid: c.design().validate().ok(),
        beta1_embedding: check_embedding(&m.beta1, &p.b1, &m.c),
        beta2_embedding: check_embedding(&m.beta2, &p.b2, &m.c),
        commutes,
        free,
        images_closed: closure_of(&m.c, img1) == img1 && closure_of(&m.c, img2) == img2,
        functions_inherited: inherited(&p.b1, &m.beta1) && inherited(&p.b2, &m.beta2),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomOutcome {
    pub checked: u64,
    pub counterexamples: Vec<String>,
}

impl AxiomOutcome {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }

    fn merge(mut self, other: AxiomOutcome) -> AxiomOutcome {
        self.checked += other.checked;
        self.counterexamples.extend(other.counterexamples);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub params: Params,
    pub size_bound: usize,
    /// Isomorphism classes of structures with at most `size_bound` vertices.
    pub classes: usize,
    pub hereditary: AxiomOutcome,
    pub joint_embedding: AxiomOutcome,
    pub amalgamation: AxiomOutcome,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.hereditary.holds() && self.joint_embedding.holds() && self.amalgamation.holds()
    }
}

/// Exhaustively checks the hereditary, joint-embedding and amalgamation
/// properties over all structures with at most `size_bound` vertices.
///
/// Structures range over isomorphism class representatives; embeddings range
/// over all embeddings between them. The budget caps the number of amalgam
/// problems and is checked before any amalgam is built.
pub fn check_class_axioms(
    params: Params,
    size_bound: usize,
    budget: Budget,
) -> Result<AxiomReport> {
    let mut members: Vec<Vec<ClosureStructure>> = Vec::new();
    let mut forms = Vec::new();
    for n in 0..=size_bound {
        let census = enumerate_partial_designs(params, n, budget)?;
        forms.push(census.forms.clone());
        members.push(
            census
                .structures
                .into_iter()
                .map(ClosureStructure::new)
                .collect::<Result<_>>()?,
        );
    }
    let all: Vec<&ClosureStructure> = members.iter().flatten().collect();

    let hereditary = all
        .par_iter()
        .map(|s| {
            let mut out = AxiomOutcome::default();
            for bits in 0..(1u64 << s.n()) {
                let set = VertexSet::from_bits(bits);
                if !is_closed(*s, set) {
                    continue;
                }
                out.checked += 1;
                let sub = s.restrict(set);
                let inclusion = set.to_vec();
                let listed = canonical_form(&sub)
                    .map(|f| {
                        forms[set.len()]
                            .binary_search(&f.as_bytes().to_vec())
                            .is_ok()
                    })
                    .unwrap_or(false);
                if !(sub.design().validate().ok()
                    && check_embedding(&inclusion, &sub, *s)
                    && listed)
                {
                    out.counterexamples.push(format!(
                        "hereditary: {:?} restricted to {{{set}}}",
                        s.design()
                    ));
                }
            }
            out
        })
        .reduce(AxiomOutcome::default, AxiomOutcome::merge);

    let pairs: Vec<(&ClosureStructure, &ClosureStructure)> = all
        .iter()
        .flat_map(|a| all.iter().map(move |b| (*a, *b)))
        .collect();
    let joint = pairs
        .par_iter()
        .map(|&(b1, b2)| {
            let mut out = AxiomOutcome {
                checked: 1,
                ..Default::default()
            };
            let p = AmalgamProblem {
                a: ClosureStructure::empty(params).expect("empty structure"),
                b1: b1.clone(),
                b2: b2.clone(),
                alpha1: Vec::new(),
                alpha2: Vec::new(),
            };
            let ok = free_amalgam(&p)
                .map(|m| verify_amalgam(&p, &m).holds())
                .unwrap_or(false);
            if !ok {
                out.counterexamples.push(format!(
                    "joint embedding: {:?} and {:?}",
                    b1.design(),
                    b2.design()
                ));
            }
            out
        })
        .reduce(AxiomOutcome::default, AxiomOutcome::merge);

    // every (A, B1, B2) with the embeddings of A into each side
    let mut problems = Vec::new();
    let mut total: u64 = 0;
    for a in &all {
        let targets: Vec<(&ClosureStructure, Vec<Vec<usize>>)> = all
            .iter()
            .filter(|b| b.n() >= a.n())
            .map(|b| (*b, enumerate_embeddings(*a, *b)))
            .filter(|(_, e)| !e.is_empty())
            .collect();
        for (b1, e1) in &targets {
            for (b2, e2) in &targets {
                total += (e1.len() * e2.len()) as u64;
                problems.push((*a, *b1, e1.clone(), *b2, e2.clone()));
            }
        }
    }
    if total > budget.0 {
        return Err(Error::BudgetExceeded { limit: budget.0 });
    }
    let amalgamation = problems
        .par_iter()
        .map(|(a, b1, e1, b2, e2)| {
            let mut out = AxiomOutcome::default();
            for alpha1 in e1 {
                for alpha2 in e2 {
                    out.checked += 1;
                    let p = AmalgamProblem {
                        a: (*a).clone(),
                        b1: (*b1).clone(),
                        b2: (*b2).clone(),
                        alpha1: alpha1.clone(),
                        alpha2: alpha2.clone(),
                    };
                    let ok = free_amalgam(&p).map(|m| verify_amalgam(&p, &m).holds()).unwrap_or(false);
                    if !ok {
                        out.counterexamples.push(format!(
                            "amalgamation: A={:?} B1={:?} B2={:?} alpha1={alpha1:?} alpha2={alpha2:?}",
                            a.design(),
                            b1.design(),
                            b2.design()
                        ));
                    }
                }
            }
            out
        })
        .reduce(AxiomOutcome::default, AxiomOutcome::merge);

    let mut report = AxiomReport {
        params,
        size_bound,
        classes: all.len(),
        hereditary,
        joint_embedding: joint,
        amalgamation,
    };
    for outcome in [
        &mut report.hereditary,
        &mut report.joint_embedding,
        &mut report.amalgamation,
    ] {
        outcome.counterexamples.sort();
    }
    Ok(report)
}
