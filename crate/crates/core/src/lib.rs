//! Simulator for a security-enhanced quantum memory made of two phase-incoherent
//! Ramsey interferometers acting on one two-level atomic ensemble.
//!
//! - [`bloch`]: rotations of Bloch vectors and the state ↔ probability map
//! - [`sequence`]: two-frame pulse timelines
//! - [`analysis`]: Ramsey flops, scrambled state distributions, phase ambiguity
//! - [`protocol`]: the secure yes/no record and its timing rules
//! - [`expsim`]: projection noise, contrast decay, repeated trials, fringe fitting
//! - [`harness`]: scenario files, CSV/JSON outputs, CLI plumbing

pub mod analysis;
pub mod bloch;
pub mod error;
pub mod expsim;
pub mod harness;
pub mod protocol;
pub mod sequence;

pub use bloch::{excitation_probability, precess, rotate_inplane, BlochVector, InPlaneAxis};
pub use error::{Error, Result};
pub use sequence::{simulate, trajectory, Frame, FrameSet, SequenceEvent, Timeline};
