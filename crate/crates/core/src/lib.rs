//! Correlation measures for two-qubit X states: closed forms, numerical
//! oracles, local decoherence and sudden-death analysis.

pub mod channels;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod format;
pub mod linalg;
pub mod measures;
pub mod optim;
pub mod oracle;
pub mod roots;
pub mod states;

pub use channels::{ChannelKind, ChannelSpec, KrausSet};
pub use dynamics::{DeathTime, PfFamilyState, SuddenDeathRecord};
pub use error::{Error, Result};
pub use experiments::{CurveFamily, QMode, SweepReport};
pub use measures::{Measure, MeasureRecord, QParameter, Settings};
pub use states::{CVector, DensityMatrix4, Spectrum4};
