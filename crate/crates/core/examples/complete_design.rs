//! Completing partial designs, counting completions, and growing the vertex
//! set when no completion exists.

use design_ramsey::enumeration::{
    complete_design, complete_design_growing, count_completions, Divisibility,
};
use design_ramsey::structures::{Params, PartialDesign};
use design_ramsey::Budget;

fn main() -> design_ramsey::Result<()> {
    let params = Params::new(3, 2, 1)?;
    let start = PartialDesign::new(params, 7, [[0, 1, 2], [0, 3, 4]])?;
    println!(
        "completions of two lines on 7 points: {}",
        count_completions(&start, Budget::default())?
    );
    if let Some(done) = complete_design(&start)? {
        let blocks: Vec<_> = done.blocks().iter().map(|b| b.to_vec()).collect();
        println!("first completion: {blocks:?}");
    }

    let empty9 = PartialDesign::empty(params, 9)?;
    println!(
        "labelled STS(9): {}",
        count_completions(&empty9, Budget::default())?
    );

    // a single block on 4 points has no completion until 7 points
    let block = PartialDesign::new(params, 4, [[0, 1, 2]])?;
    let grown = complete_design_growing(&block, 9, &Divisibility, Budget::default())?
        .expect("completes at 7");
    println!(
        "grown to {} points with {} blocks",
        grown.n(),
        grown.num_blocks()
    );

    let pairs = Params::new(4, 2, 2)?;
    let empty7 = PartialDesign::empty(pairs, 7)?;
    println!(
        "labelled 2-(7,4,2) designs: {}",
        count_completions(&empty7, Budget::default())?
    );
    Ok(())
}
