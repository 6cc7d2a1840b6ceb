//! Isomorphism classes of partial Steiner triple systems, and the complete
//! systems among them.

use design_ramsey::enumeration::{divisibility_admissible, enumerate_partial_designs};
use design_ramsey::structures::Params;
use design_ramsey::Budget;

fn main() -> design_ramsey::Result<()> {
    let params = Params::new(3, 2, 1)?;
    println!("n classes labeled complete-classes complete-labeled admissible");
    for n in 0..=7 {
        let census = enumerate_partial_designs(params, n, Budget::default())?;
        let complete = census.complete_only();
        println!(
            "{n} {} {} {} {} {}",
            census.classes(),
            census.labeled(),
            complete.classes(),
            complete.labeled(),
            divisibility_admissible(params, n),
        );
    }
    Ok(())
}
