//! Canonical forms, isomorphism and automorphism groups.

use design_ramsey::morphisms::{automorphism_count, canonical_form, find_isomorphism};
use design_ramsey::structures::format::write_design;
use design_ramsey::structures::{ClosureStructure, Params, PartialDesign};

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
    let shuffled = ClosureStructure::new(fano.design().relabel(&[3, 6, 0, 5, 1, 2, 4]))?;

    let (f1, f2) = (canonical_form(&fano)?, canonical_form(&shuffled)?);
    println!("digests equal: {}", f1.digest_hex() == f2.digest_hex());
    println!("isomorphism: {:?}", find_isomorphism(&fano, &shuffled));
    println!("|Aut(Fano)| = {}", automorphism_count(&fano));
    print!(
        "canonical design:\n{}",
        write_design(&f1.canonical_design(&fano))
    );
    Ok(())
}
