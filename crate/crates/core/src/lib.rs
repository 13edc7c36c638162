pub mod cli;
pub mod error;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod separable;
pub mod thermal;
pub mod witness;
pub mod zerotemp;

pub use error::{Error, Mode, Result};
pub use model::{critical_coupling, critical_temperature, order_parameter_zero_t, ModelParams, PhaseLabel};
pub use numerics::QuadratureSpec;
pub use separable::{nearest_a, NearestA, SeparableState};
pub use thermal::{OverlapFactor, ThermalPoint};
pub use witness::{MomentSet, WitnessReport};
