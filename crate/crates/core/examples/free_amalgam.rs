//! Free amalgamation of two ordered blocks over a shared vertex, with its
//! certificate.

use design_ramsey::amalgamation::{free_amalgam, verify_amalgam, AmalgamProblem};
use design_ramsey::morphisms::ordered;
use design_ramsey::structures::{Params, PartialDesign};

fn main() -> design_ramsey::Result<()> {
    let params = Params::new(3, 2, 1)?;
    let point = ordered(PartialDesign::empty(params, 1)?, vec![0])?;
    let b1 = ordered(PartialDesign::new(params, 3, [[0, 1, 2]])?, vec![0, 1, 2])?;
    let b2 = ordered(PartialDesign::new(params, 3, [[0, 1, 2]])?, vec![1, 0, 2])?;

    // A's vertex is the smallest of B1 and the middle of B2
    let problem = AmalgamProblem {
        a: point,
        b1,
        b2,
        alpha1: vec![0],
        alpha2: vec![0],
    };
    let m = free_amalgam(&problem)?;
    println!(
        "blocks: {:?}",
        m.c.structure
            .design()
            .blocks()
            .iter()
            .map(|b| b.to_vec())
            .collect::<Vec<_>>()
    );
    println!("order: {:?}", m.c.order.sequence());
    println!("beta1 = {:?}, beta2 = {:?}", m.beta1, m.beta2);
    for (name, ok) in verify_amalgam(&problem, &m).entries() {
        println!("{name}: {ok}");
    }
    Ok(())
}
