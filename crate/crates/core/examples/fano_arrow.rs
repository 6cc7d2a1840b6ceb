//! Ramsey arrows: every 2-colouring of the points of the ordered Fano plane
//! has a monochromatic line, but three colours are not enough to force one.

use design_ramsey::morphisms::ordered;
use design_ramsey::ramsey::{arrow_check, find_mono_copy, search_witness, ArrowInstance};
use design_ramsey::structures::{Params, PartialDesign};
use design_ramsey::Budget;

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
    let fano = ordered(PartialDesign::new(params, 7, lines)?, (0..7).collect())?;
    let line = ordered(PartialDesign::new(params, 3, [[0, 1, 2]])?, vec![0, 1, 2])?;
    let point = ordered(PartialDesign::empty(params, 1)?, vec![0])?;

    for r in 1..=3 {
        let v = arrow_check(&fano, &line, &point, r, Budget::default())?;
        println!(
            "Fano -> (line)^point_{r}: {} after {} nodes",
            v.holds, v.nodes
        );
        if let Some(w) = v.witness {
            let inst = ArrowInstance::new(fano.clone(), line.clone(), point.clone(), r)?;
            assert!(find_mono_copy(&inst, &w).is_none());
            println!("  colouring without a monochromatic line: {w:?}");
        }
    }

    // pigeonhole: the smallest ordered host forcing two same-coloured points
    let two = ordered(PartialDesign::empty(params, 2)?, vec![0, 1])?;
    let host =
        search_witness(&two, &point, 2, 4, Budget::default())?.expect("three points suffice");
    println!(
        "smallest host for 2 points, 2 colours: {} vertices",
        host.structure.n()
    );
    Ok(())
}
