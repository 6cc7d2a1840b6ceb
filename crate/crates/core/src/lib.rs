//! Partial `(k, t, λ)`-designs encoded as relational structures with
//! neighbourhood (closure) functions.
//!
//! A partial design is a set of `k`-element blocks on a finite vertex set in
//! which every `t`-subset lies in at most `λ` blocks. Encoding it with partial
//! functions `F^ℓ` that send a `t`-tuple to its neighbourhood turns the
//! substructures into exactly the *closed* vertex sets, and with that notion of
//! substructure the class of all such structures has free amalgamation.
//!
//! The crate is organised around that encoding:
//!
//! * [`structures`] – parameters, partial designs, the closure-structure
//!   encoding and its text formats;
//! * [`morphisms`] – closures, strong embeddings, copies and canonical forms;
//! * [`amalgamation`] – free amalgams and exhaustive checks of the
//!   amalgamation-class axioms;
//! * [`ramsey`] – free orderings and brute-force checking of arrow statements
//!   `C → (B)^A_r`;
//! * [`enumeration`] – isomorphism-free census, completion search and the
//!   divisibility conditions;
//! * [`cli`] – the command-line front end used by the `designs` binary.
//!
//! ```
//! use design_ramsey::morphisms::closure_of;
//! use design_ramsey::structures::{ClosureStructure, Params, PartialDesign};
//! use design_ramsey::VertexSet;
//!
//! let params = Params::new(3, 2, 1)?;
//! let d = PartialDesign::new(params, 7, [[0, 1, 2], [0, 3, 4]])?;
//! let s = ClosureStructure::new(d)?;
//! assert_eq!(closure_of(&s, VertexSet::from_iter([0, 1])).to_vec(), [0, 1, 2]);
//! # Ok::<(), design_ramsey::Error>(())
//! ```

pub mod amalgamation;
pub mod cli;
pub mod enumeration;
mod error;
pub mod morphisms;
pub mod ramsey;
pub mod structures;
mod vertex_set;

pub use error::{Error, Result};
pub use vertex_set::{VertexSet, MAX_VERTICES};

/// Node budget for exhaustive searches.
///
/// Budgets are counted in search nodes rather than wall-clock time so that a
/// run either always or never exceeds its budget.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const UNLIMITED: Budget = Budget(u64::MAX);

    pub(crate) fn counter(self) -> NodeCounter {
        NodeCounter {
            limit: self.0,
            used: 0,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget(50_000_000)
    }
}

#[derive(Debug)]
pub(crate) struct NodeCounter {
    limit: u64,
    used: u64,
}

impl NodeCounter {
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub(crate) fn used(&self) -> u64 {
        self.used
    }
}
