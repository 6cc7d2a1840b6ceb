//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Every check compares the library against an oracle
//! written independently here.

use std::collections::BTreeSet;
use std::panic;
use std::time::Instant;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use design_ramsey::amalgamation::{
    check_class_axioms, free_amalgam, verify_amalgam, AmalgamProblem,
};
use design_ramsey::enumeration::{
    all_completions, complete_design, count_completions, divisibility_admissible,
    enumerate_partial_designs,
};
use design_ramsey::morphisms::{
    canonical_form, check_embedding, closure_of, enumerate_copies, enumerate_embeddings,
    functions_preserved, is_closed, ordered, outer_blocks_thin, relation_preserved,
    thin_iff_functions_preserved,
};
use design_ramsey::ramsey::{check_instance, find_mono_copy, orderings, ArrowInstance};
use design_ramsey::structures::{
    decode, encode, ClosureStructure, Order, OrderedPartialDesign, OrderedStructure, Params,
    PartialDesign,
};
use design_ramsey::{Budget, VertexSet};

type Check = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("1 encode/decode round trip", round_trip),
        ("2 neighbourhood size law", neighbourhood_sizes),
        ("3 closure operator laws", closure_laws),
        (
            "4 function preservation vs thin outer blocks",
            condition_equivalence,
        ),
        ("5 free amalgamation", free_amalgamation),
        ("6 class axioms", class_axioms),
        ("7 arrow checker", arrow_checker),
        ("8 completion census", completion_census),
        ("9 copy counts", copy_counts),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.2}s]"),
            Err(why) => {
                failures += 1;
                println!("FAIL {name}: {why} [{secs:.2}s]");
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn params(k: usize, t: usize, lambda: usize) -> Params {
    Params::new(k, t, lambda).unwrap()
}

// ----- oracles -----

/// Every labelled partial design on `n` vertices: all sets of k-subsets in
/// which every t-subset lies in at most λ members.
fn labelled_designs(p: Params, n: usize) -> Vec<PartialDesign> {
    let ksets: Vec<Vec<usize>> = (0..n).combinations(p.k()).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    fn rec(
        p: Params,
        n: usize,
        ksets: &[Vec<usize>],
        i: usize,
        chosen: &mut Vec<Vec<usize>>,
        out: &mut Vec<PartialDesign>,
    ) {
        if i == ksets.len() {
            out.push(PartialDesign::new(p, n, chosen.clone()).unwrap());
            return;
        }
        rec(p, n, ksets, i + 1, chosen, out);
        chosen.push(ksets[i].clone());
        if naive_valid(p, chosen) {
            rec(p, n, ksets, i + 1, chosen, out);
        }
        chosen.pop();
    }
    rec(p, n, &ksets, 0, &mut chosen, &mut out);
    out
}

fn naive_valid(p: Params, blocks: &[Vec<usize>]) -> bool {
    let mut seen = BTreeSet::new();
    for b in blocks {
        if b.len() != p.k() || !seen.insert(b.clone()) {
            return false;
        }
        for tset in b.iter().combinations(p.t()) {
            let hits = blocks
                .iter()
                .filter(|c| tset.iter().all(|v| c.contains(v)))
                .count();
            if hits > p.lambda() {
                return false;
            }
        }
    }
    true
}

fn block_lists(d: &PartialDesign) -> Vec<Vec<usize>> {
    d.blocks().iter().map(|b| b.to_vec()).collect()
}

/// Closure by repeatedly absorbing blocks that meet the set in ≥ t vertices.
fn naive_closure(d: &PartialDesign, set: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut s = set.clone();
    loop {
        let before = s.len();
        for b in block_lists(d) {
            if b.iter().filter(|v| s.contains(v)).count() >= d.params().t() {
                s.extend(b);
            }
        }
        if s.len() == before {
            return s;
        }
    }
}

fn naive_neighbourhood(d: &PartialDesign, tset: &[usize]) -> BTreeSet<usize> {
    block_lists(d)
        .into_iter()
        .filter(|b| tset.iter().all(|v| b.contains(v)))
        .flatten()
        .collect()
}

fn image(map: &[usize], set: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
    set.into_iter().map(|v| map[v]).collect()
}

/// Relation condition: k-sets are blocks exactly when their images are.
fn naive_relation(map: &[usize], a: &PartialDesign, b: &PartialDesign) -> bool {
    let bb: BTreeSet<Vec<usize>> = block_lists(b).into_iter().collect();
    (0..a.n()).combinations(a.params().k()).all(|x| {
        let in_a = a
            .blocks()
            .contains(&VertexSet::from_iter(x.iter().copied()));
        let fx: Vec<usize> = image(map, x).into_iter().collect();
        in_a == bb.contains(&fx)
    })
}

/// Function condition: f(N_A(T)) = N_B(f(T)) for every t-set T.
fn naive_functions(map: &[usize], a: &PartialDesign, b: &PartialDesign) -> bool {
    (0..a.n()).combinations(a.params().t()).all(|tset| {
        let ft: Vec<usize> = image(map, tset.iter().copied()).into_iter().collect();
        image(map, naive_neighbourhood(a, &tset)) == naive_neighbourhood(b, &ft)
    })
}

/// Thin outer blocks: blocks of B outside the image of A's blocks meet the
/// image of A in at most t-1 vertices.
fn naive_thin(map: &[usize], a: &PartialDesign, b: &PartialDesign) -> bool {
    let img = image(map, 0..a.n());
    let inner: BTreeSet<BTreeSet<usize>> =
        block_lists(a).into_iter().map(|x| image(map, x)).collect();
    block_lists(b).into_iter().all(|blk| {
        let s: BTreeSet<usize> = blk.iter().copied().collect();
        inner.contains(&s) || blk.iter().filter(|v| img.contains(v)).count() < a.params().t()
    })
}

fn naive_embedding(map: &[usize], a: &PartialDesign, b: &PartialDesign) -> bool {
    map.iter().all_unique()
        && map.iter().all(|&v| v < b.n())
        && naive_relation(map, a, b)
        && naive_functions(map, a, b)
        && naive_thin(map, a, b)
}

fn naive_automorphisms(d: &PartialDesign) -> usize {
    let blocks: BTreeSet<Vec<usize>> = block_lists(d).into_iter().collect();
    (0..d.n())
        .permutations(d.n())
        .filter(|p| {
            blocks.iter().all(|b| {
                blocks.contains(&image(p, b.iter().copied()).into_iter().collect::<Vec<_>>())
            })
        })
        .count()
}

fn structure(d: PartialDesign) -> ClosureStructure {
    ClosureStructure::new(d).unwrap()
}

// ----- criteria -----

fn round_trip() -> Result<String, String> {
    let p = params(3, 2, 1);
    let mut trips = 0u64;
    let expected = [1, 1, 1, 2, 5, 26, 271];
    for (n, want) in expected.into_iter().enumerate() {
        let corpus = labelled_designs(p, n);
        ensure!(
            corpus.len() == want,
            "{} labelled designs on {n} points",
            corpus.len()
        );
        let census =
            enumerate_partial_designs(p, n, Budget::default()).map_err(|e| e.to_string())?;
        ensure!(
            census.labeled() == corpus.len() as u128,
            "census disagrees on {n} points"
        );
        for d in &corpus {
            for seq in (0..n).permutations(n) {
                let od = OrderedPartialDesign::new(d.clone(), Order::from_sequence(seq).unwrap())
                    .unwrap();
                let back =
                    decode(&encode(&od).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                ensure!(back == od, "round trip changed {od:?}");
                trips += 1;
            }
        }
    }
    Ok(format!("{trips} ordered designs"))
}

fn neighbourhood_sizes() -> Result<String, String> {
    let mut checked = 0u64;
    for n in 0..=6 {
        for d in labelled_designs(params(3, 2, 1), n) {
            let s = structure(d.clone());
            for tset in (0..n).combinations(2) {
                let t = VertexSet::from_iter(tset.iter().copied());
                let size = d.neighborhood(t).unwrap().len();
                ensure!(size == 0 || size == 3, "|N({tset:?})| = {size} in {d:?}");
                ensure!(
                    s.neighborhood(t).len() == size,
                    "table disagrees at {tset:?}"
                );
                ensure!(
                    naive_neighbourhood(&d, &tset).len() == size,
                    "oracle disagrees at {tset:?}"
                );
                checked += 1;
            }
        }
    }
    for (k, t, lambda, max_n) in [(3, 2, 2, 6), (4, 2, 2, 7), (4, 3, 1, 6), (4, 2, 3, 6)] {
        let p = params(k, t, lambda);
        let big = (k - t) * lambda + t;
        for n in 0..=max_n {
            for d in enumerate_partial_designs(p, n, Budget::default())
                .map_err(|e| e.to_string())?
                .structures
            {
                for tset in (0..n).combinations(t) {
                    let size = naive_neighbourhood(&d, &tset).len();
                    ensure!(
                        size == 0 || (k..=big).contains(&size),
                        "|N| = {size} for ({k},{t},{lambda})"
                    );
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} t-sets"))
}

fn closure_laws() -> Result<String, String> {
    let mut subsets = 0u64;
    for n in 0..=6 {
        for d in labelled_designs(params(3, 2, 1), n) {
            let s = structure(d.clone());
            let cl: Vec<VertexSet> = (0..1u64 << n)
                .map(|b| closure_of(&s, VertexSet::from_bits(b)))
                .collect();
            for bits in 0..1u64 << n {
                let set = VertexSet::from_bits(bits);
                let c = cl[bits as usize];
                ensure!(set.is_subset(c), "not extensive at {set}");
                ensure!(cl[c.bits() as usize] == c, "not idempotent at {set}");
                let oracle = naive_closure(&d, &set.iter().collect());
                ensure!(
                    c.iter().collect::<BTreeSet<_>>() == oracle,
                    "closure of {set} differs from the oracle"
                );
                ensure!(
                    is_closed(&s, set) == (c == set),
                    "is_closed disagrees at {set}"
                );
                // monotone over all subsets of `set`
                let mut sub = bits;
                loop {
                    ensure!(cl[sub as usize].is_subset(c), "not monotone at {set}");
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & bits;
                }
                subsets += 1;
            }
            let closed: Vec<VertexSet> = (0..1u64 << n)
                .map(VertexSet::from_bits)
                .filter(|&x| cl[x.bits() as usize] == x)
                .collect();
            for (x, y) in closed.iter().cartesian_product(&closed) {
                let meet = x.intersection(*y);
                ensure!(cl[meet.bits() as usize] == meet, "{x} ∩ {y} is not closed");
            }
        }
    }
    Ok(format!("{subsets} subsets"))
}

fn condition_equivalence() -> Result<String, String> {
    let mut corpora: Vec<Vec<PartialDesign>> = Vec::new();
    corpora.push(
        (0..=5)
            .flat_map(|n| labelled_designs(params(3, 2, 1), n))
            .collect(),
    );
    corpora.push(
        (0..=5)
            .flat_map(|n| labelled_designs(params(4, 3, 1), n))
            .collect(),
    );
    for p in [params(3, 2, 2), params(4, 2, 2)] {
        let mut reps = Vec::new();
        for n in 0..=5 {
            reps.extend(
                enumerate_partial_designs(p, n, Budget::default())
                    .unwrap()
                    .structures,
            );
        }
        corpora.push(reps);
    }
    let (mut maps, mut relational) = (0u64, 0u64);
    for corpus in &corpora {
        let structs: Vec<ClosureStructure> = corpus.iter().cloned().map(structure).collect();
        for (a, b) in structs.iter().cartesian_product(&structs) {
            if a.n() > b.n() {
                continue;
            }
            for map in (0..b.n()).permutations(a.n()) {
                maps += 1;
                let rel = relation_preserved(&map, a, b);
                ensure!(
                    rel == naive_relation(&map, a.design(), b.design()),
                    "relation condition differs for {map:?}"
                );
                if !rel {
                    continue;
                }
                relational += 1;
                let two = naive_functions(&map, a.design(), b.design());
                let three = naive_thin(&map, a.design(), b.design());
                ensure!(two == three, "functions preserved = {two}, outer blocks thin = {three} for {map:?}: {a:?} -> {b:?}");
                ensure!(
                    functions_preserved(&map, a, b) == two,
                    "library function condition differs for {map:?}"
                );
                ensure!(
                    outer_blocks_thin(&map, a, b) == three,
                    "library thin-blocks condition differs for {map:?}"
                );
                ensure!(
                    check_embedding(&map, a, b) == two,
                    "check_embedding differs for {map:?}"
                );
                ensure!(
                    matches!(thin_iff_functions_preserved(&map, a, b), Ok(true)),
                    "library equivalence check fails"
                );
            }
        }
    }
    Ok(format!("{relational} block-preserving maps out of {maps}"))
}

/// Independent checks of an amalgam; `orders` holds the orders of B1, B2 and
/// C when the problem is ordered.
fn audit_amalgam(
    a: &PartialDesign,
    b1: &PartialDesign,
    b2: &PartialDesign,
    alpha: [&[usize]; 2],
    c: &PartialDesign,
    beta: [&[usize]; 2],
    orders: Option<[&Order; 3]>,
) -> Result<(), String> {
    ensure!(
        naive_valid(c.params(), &block_lists(c)),
        "amalgam is not a partial design"
    );
    for (side, (bi, bt)) in [(b1, beta[0]), (b2, beta[1])].into_iter().enumerate() {
        ensure!(bt.len() == bi.n(), "beta{} has the wrong length", side + 1);
        ensure!(
            naive_embedding(bt, bi, c),
            "beta{} is not an embedding",
            side + 1
        );
        let img = image(bt, 0..bi.n());
        ensure!(
            naive_closure(c, &img) == img,
            "image of B{} is not closed",
            side + 1
        );
    }
    for v in 0..a.n() {
        ensure!(
            beta[0][alpha[0][v]] == beta[1][alpha[1][v]],
            "square does not commute at {v}"
        );
    }
    let (i1, i2) = (image(beta[0], 0..b1.n()), image(beta[1], 0..b2.n()));
    ensure!(i1.union(&i2).count() == c.n(), "amalgam has extra vertices");
    let base: BTreeSet<usize> = (0..a.n()).map(|v| beta[0][alpha[0][v]]).collect();
    ensure!(
        i1.intersection(&i2).copied().collect::<BTreeSet<_>>() == base,
        "images overlap outside A"
    );
    let mut glued: BTreeSet<BTreeSet<usize>> = block_lists(b1)
        .into_iter()
        .map(|b| image(beta[0], b))
        .collect();
    glued.extend(block_lists(b2).into_iter().map(|b| image(beta[1], b)));
    let have: BTreeSet<BTreeSet<usize>> = block_lists(c)
        .into_iter()
        .map(|b| b.into_iter().collect())
        .collect();
    ensure!(have == glued, "amalgam is not free");
    if let Some([o1, o2, oc]) = orders {
        for (o, bt) in [(o1, beta[0]), (o2, beta[1])] {
            for (u, v) in (0..o.len()).tuple_combinations() {
                ensure!(o.less(u, v) == oc.less(bt[u], bt[v]), "order not preserved");
            }
        }
    }
    Ok(())
}

/// A random partial design on `n` vertices, built by trying random blocks.
fn random_design(rng: &mut ChaCha8Rng, p: Params, n: usize) -> PartialDesign {
    let mut d = PartialDesign::empty(p, n).unwrap();
    if n < p.k() {
        return d;
    }
    for _ in 0..rng.gen_range(0..3 * n) {
        let blk: VertexSet = (0..n)
            .collect::<Vec<_>>()
            .choose_multiple(rng, p.k())
            .copied()
            .collect();
        if let Ok(next) = d.with_block(blk) {
            d = next;
        }
    }
    d
}

/// A random extension of `a` on `n` vertices in which `a`'s image is closed,
/// with the embedding.
fn random_extension(
    rng: &mut ChaCha8Rng,
    a: &PartialDesign,
    n: usize,
) -> (PartialDesign, Vec<usize>) {
    let p = a.params();
    let mut slots: Vec<usize> = (0..n).collect();
    slots.shuffle(rng);
    let alpha = slots[..a.n()].to_vec();
    let img = VertexSet::from_iter(alpha.iter().copied());
    let mut d = PartialDesign::new(p, n, a.blocks().iter().map(|b| b.map(&alpha))).unwrap();
    if n >= p.k() {
        for _ in 0..rng.gen_range(0..3 * n) {
            let blk: VertexSet = (0..n)
                .collect::<Vec<_>>()
                .choose_multiple(rng, p.k())
                .copied()
                .collect();
            if blk.intersection(img).len() < p.t() {
                if let Ok(next) = d.with_block(blk) {
                    d = next;
                }
            }
        }
    }
    (d, alpha)
}

/// A random order on `n` vertices under which `alpha` is increasing with
/// respect to `inner`.
fn random_compatible_order(
    rng: &mut ChaCha8Rng,
    n: usize,
    alpha: &[usize],
    inner: &Order,
) -> Order {
    let mut seq: Vec<usize> = (0..n).collect();
    seq.shuffle(rng);
    let mut fill = inner.sequence().iter().map(|&v| alpha[v]);
    let seq = seq
        .into_iter()
        .map(|v| {
            if alpha.contains(&v) {
                fill.next().unwrap()
            } else {
                v
            }
        })
        .collect();
    Order::from_sequence(seq).unwrap()
}

fn free_amalgamation() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a11a);
    let param_pool = [
        params(3, 2, 1),
        params(3, 2, 2),
        params(4, 2, 1),
        params(4, 3, 1),
        params(4, 2, 2),
    ];
    let samples = 10_000;
    let mut ordered_samples = 0;
    for i in 0..samples {
        let p = *param_pool.choose(&mut rng).unwrap();
        let na = rng.gen_range(0..=5);
        let a = random_design(&mut rng, p, na);
        let n1 = a.n() + rng.gen_range(0..=4);
        let (b1, alpha1) = random_extension(&mut rng, &a, n1);
        let n2 = a.n() + rng.gen_range(0..=4);
        let (b2, alpha2) = random_extension(&mut rng, &a, n2);
        if i % 2 == 0 {
            let problem = AmalgamProblem {
                a: structure(a.clone()),
                b1: structure(b1.clone()),
                b2: structure(b2.clone()),
                alpha1: alpha1.clone(),
                alpha2: alpha2.clone(),
            };
            let m = free_amalgam(&problem).map_err(|e| format!("sample {i}: {e}"))?;
            ensure!(
                verify_amalgam(&problem, &m).holds(),
                "sample {i}: certificate fails"
            );
            audit_amalgam(
                &a,
                &b1,
                &b2,
                [&alpha1, &alpha2],
                m.c.design(),
                [&m.beta1, &m.beta2],
                None,
            )
            .map_err(|e| format!("sample {i}: {e}"))?;
        } else {
            ordered_samples += 1;
            let mut seq: Vec<usize> = (0..a.n()).collect();
            seq.shuffle(&mut rng);
            let oa = Order::from_sequence(seq).unwrap();
            let o1 = random_compatible_order(&mut rng, b1.n(), &alpha1, &oa);
            let o2 = random_compatible_order(&mut rng, b2.n(), &alpha2, &oa);
            let problem = AmalgamProblem {
                a: OrderedStructure::new(structure(a.clone()), oa).unwrap(),
                b1: OrderedStructure::new(structure(b1.clone()), o1.clone()).unwrap(),
                b2: OrderedStructure::new(structure(b2.clone()), o2.clone()).unwrap(),
                alpha1: alpha1.clone(),
                alpha2: alpha2.clone(),
            };
            let m = free_amalgam(&problem).map_err(|e| format!("sample {i}: {e}"))?;
            ensure!(
                verify_amalgam(&problem, &m).holds(),
                "sample {i}: certificate fails"
            );
            audit_amalgam(
                &a,
                &b1,
                &b2,
                [&alpha1, &alpha2],
                m.c.structure.design(),
                [&m.beta1, &m.beta2],
                Some([&o1, &o2, &m.c.order]),
            )
            .map_err(|e| format!("sample {i}: {e}"))?;
        }
    }

    // every problem with |B1|, |B2| <= 5, up to isomorphism of A, B1, B2
    let mut exhaustive = 0u64;
    for p in [params(3, 2, 1), params(4, 3, 1)] {
        let all: Vec<ClosureStructure> = (0..=5)
            .flat_map(|n| {
                enumerate_partial_designs(p, n, Budget::default())
                    .unwrap()
                    .structures
            })
            .map(structure)
            .collect();
        for a in &all {
            let targets: Vec<(&ClosureStructure, Vec<Vec<usize>>)> = all
                .iter()
                .map(|b| (b, enumerate_embeddings(a, b)))
                .filter(|(_, e)| !e.is_empty())
                .collect();
            for ((b1, e1), (b2, e2)) in targets.iter().cartesian_product(&targets) {
                for (alpha1, alpha2) in e1.iter().cartesian_product(e2) {
                    let problem = AmalgamProblem {
                        a: a.clone(),
                        b1: (*b1).clone(),
                        b2: (*b2).clone(),
                        alpha1: alpha1.clone(),
                        alpha2: alpha2.clone(),
                    };
                    let m = free_amalgam(&problem).map_err(|e| e.to_string())?;
                    audit_amalgam(
                        a.design(),
                        b1.design(),
                        b2.design(),
                        [alpha1, alpha2],
                        m.c.design(),
                        [&m.beta1, &m.beta2],
                        None,
                    )?;
                    exhaustive += 1;
                }
            }
        }
    }
    Ok(format!(
        "{samples} sampled ({ordered_samples} ordered) and {exhaustive} exhaustive problems"
    ))
}

fn class_axioms() -> Result<String, String> {
    let mut parts = Vec::new();
    for p in [params(3, 2, 1), params(4, 3, 1)] {
        let r = check_class_axioms(p, 5, Budget::default()).map_err(|e| e.to_string())?;
        for (name, o) in [
            ("hereditary", &r.hereditary),
            ("joint embedding", &r.joint_embedding),
            ("amalgamation", &r.amalgamation),
        ] {
            ensure!(
                o.holds(),
                "({},{},{}) {name}: {:?}",
                p.k(),
                p.t(),
                p.lambda(),
                o.counterexamples.first()
            );
            ensure!(o.checked > 0, "{name} checked nothing");
        }
        parts.push(format!(
            "({},{},{}) {} classes, {} amalgams",
            p.k(),
            p.t(),
            p.lambda(),
            r.classes,
            r.amalgamation.checked
        ));
    }
    Ok(parts.join("; "))
}

/// Lexicographically least colouring without a monochromatic copy of B, by
/// trying all r^m colourings.
fn brute_force_arrow(inst: &ArrowInstance) -> Option<Vec<usize>> {
    let m = inst.copies_of_a.len();
    let members: Vec<Vec<usize>> = inst
        .copies_of_b
        .iter()
        .map(|cb| {
            (0..m)
                .filter(|&i| inst.copies_of_a[i].vertices.is_subset(cb.vertices))
                .collect()
        })
        .collect();
    (0..m)
        .map(|_| 0..inst.r)
        .multi_cartesian_product()
        .chain((m == 0).then(Vec::new))
        .find(|col| {
            members
                .iter()
                .all(|mem| !mem.iter().map(|&i| col[i]).all_equal())
        })
}

fn arrow_checker() -> Result<String, String> {
    let p = params(3, 2, 1);
    // every ordered structure on at most 5 vertices, and the small ones used as A and B
    let mut hosts = Vec::new();
    for n in 0..=5 {
        for d in enumerate_partial_designs(p, n, Budget::default())
            .unwrap()
            .structures
        {
            hosts.extend(
                design_ramsey::ramsey::distinct_orderings(&structure(d), Budget::default())
                    .unwrap(),
            );
        }
    }
    for d in enumerate_partial_designs(p, 6, Budget::default())
        .unwrap()
        .structures
    {
        hosts.extend(
            orderings(&structure(d), Budget::default())
                .unwrap()
                .into_iter()
                .step_by(37),
        );
    }
    let patterns: Vec<OrderedStructure> = hosts
        .iter()
        .filter(|h| h.structure.n() <= 3)
        .cloned()
        .collect();
    let (mut instances, mut held) = (0u64, 0u64);
    for c in &hosts {
        for (a, b) in patterns.iter().cartesian_product(&patterns) {
            for r in 1..=3 {
                let inst = ArrowInstance::new(c.clone(), b.clone(), a.clone(), r).unwrap();
                if inst.copies_of_a.len() > 10 {
                    continue;
                }
                let expected = brute_force_arrow(&inst);
                match check_instance(&inst, Budget::default()) {
                    Ok(v) => {
                        ensure!(
                            v.holds == expected.is_none(),
                            "verdict differs on {c:?} {b:?} {a:?} r={r}"
                        );
                        ensure!(
                            v.witness == expected,
                            "witness differs on {c:?} {b:?} {a:?} r={r}"
                        );
                        held += v.holds as u64;
                    }
                    Err(design_ramsey::Error::EmptyPattern) => {
                        ensure!(
                            inst.copies_of_a.is_empty() && !inst.copies_of_b.is_empty(),
                            "spurious error"
                        );
                    }
                    Err(e) => return Err(e.to_string()),
                }
                instances += 1;
            }
        }
    }

    let pts = |n: usize| ordered(PartialDesign::empty(p, n).unwrap(), (0..n).collect()).unwrap();
    let pigeon = ArrowInstance::new(pts(3), pts(2), pts(1), 2).unwrap();
    let v = check_instance(&pigeon, Budget::default()).map_err(|e| e.to_string())?;
    ensure!(v.holds, "pigeonhole instance refuted");

    let same = ArrowInstance::new(pts(2), pts(2), pts(1), 2).unwrap();
    let v = check_instance(&same, Budget::default()).map_err(|e| e.to_string())?;
    let w = v.witness.ok_or("C = B instance not refuted")?;
    ensure!(!v.holds, "C = B instance holds");
    ensure!(
        find_mono_copy(&same, &w).is_none(),
        "witness has a monochromatic copy"
    );
    ensure!(
        w.len() == 2 && w[0] != w[1],
        "witness {w:?} does not split the two vertices"
    );
    Ok(format!(
        "{instances} instances ({held} hold), pigeonhole holds, C = B refuted by {w:?}"
    ))
}

fn completion_census() -> Result<String, String> {
    let p = params(3, 2, 1);
    let empty7 = PartialDesign::empty(p, 7).unwrap();
    let labelled = count_completions(&empty7, Budget::default()).map_err(|e| e.to_string())?;
    ensure!(labelled == 30, "{labelled} labelled STS(7)");
    let all = all_completions(&empty7, Budget::default()).map_err(|e| e.to_string())?;
    ensure!(all.len() == 30, "all_completions returned {}", all.len());
    for d in &all {
        ensure!(
            naive_valid(p, &block_lists(d)) && d.num_blocks() == 7,
            "{d:?} is not an STS(7)"
        );
        ensure!(
            naive_automorphisms(d) == 168,
            "an STS(7) without 168 automorphisms"
        );
    }
    let forms: BTreeSet<Vec<u8>> = all
        .iter()
        .map(|d| {
            canonical_form(&structure(d.clone()))
                .unwrap()
                .as_bytes()
                .to_vec()
        })
        .collect();
    ensure!(forms.len() == 1, "{} classes of STS(7)", forms.len());
    let census = enumerate_partial_designs(p, 7, Budget::default())
        .unwrap()
        .complete_only();
    ensure!(
        census.classes() == 1 && census.labeled() == 30,
        "census of STS(7) disagrees"
    );

    let sts9 = count_completions(&PartialDesign::empty(p, 9).unwrap(), Budget::default())
        .map_err(|e| e.to_string())?;
    ensure!(sts9 == 840, "{sts9} labelled STS(9)");

    let empty6 = PartialDesign::empty(p, 6).unwrap();
    ensure!(
        complete_design(&empty6).unwrap().is_none(),
        "an STS(6) was found"
    );
    ensure!(
        count_completions(&empty6, Budget::default()).unwrap() == 0,
        "STS(6) count is not 0"
    );
    ensure!(
        !divisibility_admissible(p, 6),
        "6 points reported admissible"
    );
    Ok("STS(7): 30 labelled, 1 class; STS(9): 840 labelled; none on 6 points".into())
}

fn copy_counts() -> Result<String, String> {
    let p = params(3, 2, 1);
    let fano = PartialDesign::new(
        p,
        7,
        [
            [0, 1, 2],
            [0, 3, 4],
            [0, 5, 6],
            [1, 3, 5],
            [1, 4, 6],
            [2, 3, 6],
            [2, 4, 5],
        ],
    )
    .unwrap();
    let line = PartialDesign::new(p, 3, [[0, 1, 2]]).unwrap();
    let pair = PartialDesign::empty(p, 2).unwrap();
    let mut parts = Vec::new();
    for (name, a, expected) in [("line", &line, 7), ("two points", &pair, 0)] {
        let oracle_maps = (0..7)
            .permutations(a.n())
            .filter(|m| naive_embedding(m, a, &fano))
            .count();
        let aut = naive_automorphisms(a);
        ensure!(
            oracle_maps % aut == 0,
            "{oracle_maps} embeddings not divisible by {aut}"
        );
        let unordered = enumerate_copies(&structure(a.clone()), &structure(fano.clone())).len();
        ensure!(unordered == expected, "{unordered} copies of the {name}");
        ensure!(
            oracle_maps / aut == expected,
            "oracle finds {} copies of the {name}",
            oracle_maps / aut
        );

        // ordered: no division, linear orders are rigid
        let oa = ordered(a.clone(), (0..a.n()).collect()).unwrap();
        let of = ordered(fano.clone(), (0..7).collect()).unwrap();
        let increasing = (0..7)
            .combinations(a.n())
            .filter(|m| naive_embedding(m, a, &fano))
            .count();
        let ordered_copies = enumerate_copies(&oa, &of).len();
        ensure!(
            ordered_copies == increasing,
            "{ordered_copies} ordered copies, oracle {increasing}"
        );
        ensure!(
            ordered_copies == expected,
            "{ordered_copies} ordered copies of the {name}"
        );
        parts.push(format!("{name}: {expected}"));
    }
    Ok(parts.join(", "))
}
