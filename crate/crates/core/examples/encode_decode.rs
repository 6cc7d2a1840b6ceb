//! A partial design, its closure structure, and the round trip between them.

use design_ramsey::structures::format::{parse_design, write_design, write_structure};
use design_ramsey::structures::{decode, encode};

const INPUT: &str = "\
# two blocks of a (4,2,2) partial design
4 2 2 6
0 1 2 3
0 1 4 5
";

fn main() -> design_ramsey::Result<()> {
    let design = parse_design(INPUT)?;
    let report = design.design.validate();
    println!("valid: {}", report.ok());

    let structure = encode(&design)?;
    print!("{}", write_structure(&structure));

    let back = decode(&structure)?;
    assert_eq!(back, design);
    print!("{}", write_design(&back));
    Ok(())
}
