//! The small-extensions closure Γ_sme: slot vectors over the hull I with one
//! marker slot per initial segment, strata, canonical representatives, order
//! and commensurable interpolants.

mod between;
mod hull;
mod index;
mod vector;

pub use hull::{Classification, GroupModel, Hull, Stratum};
pub use index::{Block, Cut, IndexStructure, InitialSegment, Position, Slot};
pub use vector::{Marker, SlotVector, Tail};
