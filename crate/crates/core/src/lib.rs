//! Perfect Lee codes over `Z_q^n` (`q = 2n + 1`), the n-dimensional toric
//! quantum codes built on them and a burst-error interleaver that spreads
//! Lee-sphere shaped error clusters over distinct codewords.
//!
//! * [`lattice`]: exact integer linear algebra and the Lee metric.
//! * [`lee_code`]: the classical perfect code, its decoder and certificates.
//! * [`toric`]: toric-code parameters, face indexing and the 2D stabilizer check.
//! * [`interleaver`]: the qubit permutation, burst models and simulation.

pub mod error;
pub mod interleaver;
pub mod lattice;
pub mod lee_code;
pub mod toric;

pub use error::{Error, Result};
pub use interleaver::{BurstModel, BurstPattern, CorrectionReport, InterleavingMap, LogicalAddress, SimulationStats};
pub use lattice::{IntMatrix, IntVector, LeeSphere, ResidueVector, SlotOffset};
pub use lee_code::{Codeword, GeneratorSet, PackingMode, PerfectLeeCode, TileAssignment};
pub use toric::{FaceIndex, ToricParams};
