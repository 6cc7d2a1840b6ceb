//! Exhaustive check of the hereditary, joint embedding and amalgamation
//! properties for small structures.

use design_ramsey::amalgamation::check_class_axioms;
use design_ramsey::structures::Params;
use design_ramsey::Budget;

fn main() -> design_ramsey::Result<()> {
    for (k, t, lambda, bound) in [(3, 2, 1, 4), (4, 3, 1, 4), (3, 2, 2, 4)] {
        let report = check_class_axioms(Params::new(k, t, lambda)?, bound, Budget::default())?;
        println!(
            "({k},{t},{lambda}) up to {bound} vertices: {} classes, HP {} JEP {} AP {} ({} amalgams)",
            report.classes,
            report.hereditary.holds(),
            report.joint_embedding.holds(),
            report.amalgamation.holds(),
            report.amalgamation.checked,
        );
    }
    Ok(())
}
