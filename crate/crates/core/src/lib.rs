//! Simulation toolkit for space-time coded massive MIMO (STCM-MIMO) downlinks
//! whose transmit array suffers from mutual coupling.
//!
//! The pieces, bottom up:
//!
//! - [`specfun`]: sine and cosine integrals.
//! - [`coupling`]: half-wave dipole impedance matrix and coupling matrix.
//! - [`channel`]: Rayleigh draws, coupling, sub-array selection.
//! - [`stcm`]: modulation, precoding, Alamouti transmission, combining, detection.
//! - [`simulator`]: deterministic parallel Monte-Carlo BER estimation.
//! - [`optimizer`]: antenna-count search under a fixed aperture.

pub mod channel;
pub mod coupling;
pub mod error;
pub mod linalg;
pub mod optimizer;
pub mod rng;
pub mod simulator;
pub mod specfun;
pub mod stcm;

pub use channel::{ChannelRealization, SelectionStyle, SubArrayAssignment};
pub use coupling::{CouplingMatrix, DipoleArraySpec};
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use num_complex::Complex64;
pub use optimizer::{optimal_antenna_count, search, SearchSpec, SearchTrace, TraceEntry};
pub use simulator::{
    ber_confidence, simulate_ber, ArrayGeometry, BerPoint, BerResult, CombinerKnowledge, SimConfig,
    Simulator,
};
pub use stcm::{CombinedPair, ModulationKind, ModulationScheme, ReceivedPair};
