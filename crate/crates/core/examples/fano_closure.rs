//! Closures and closed sets in the Fano plane.

use design_ramsey::morphisms::{closed_subsets, closure_of, is_closed};
use design_ramsey::structures::{ClosureStructure, Params, PartialDesign};
use design_ramsey::VertexSet;

fn main() -> design_ramsey::Result<()> {
    let params = Params::new(3, 2, 1)?;
    let lines: [[usize; 3]; 7] = [
        [0, 1, 2],
        [0, 3, 4],
        [0, 5, 6],
        [1, 3, 5],
        [1, 4, 6],
        [2, 3, 6],
        [2, 4, 5],
    ];
    let fano = ClosureStructure::new(PartialDesign::new(params, 7, lines)?)?;

    for seed in [vec![0], vec![0, 1], vec![0, 1, 3]] {
        let set: VertexSet = seed.iter().copied().collect();
        println!("closure of {{{set}}} = {{{}}}", closure_of(&fano, set));
    }
    println!(
        "{{0 1}} closed: {}",
        is_closed(&fano, VertexSet::from_iter([0, 1]))
    );

    for size in 0..=7 {
        let count = closed_subsets(fano.design(), size).count();
        println!("closed sets of size {size}: {count}");
    }
    Ok(())
}
