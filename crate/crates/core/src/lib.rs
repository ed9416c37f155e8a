//! Response of static Unruh–DeWitt detectors outside a BTZ black hole in a
//! superposition of positions or masses.

pub mod params;
pub mod probability;
pub mod quadrature;
pub mod response;
pub mod specfun;
pub mod spectrum;
pub mod validation;
pub mod wightman;

pub use params::{BoundaryCondition, BranchIndex, BtzBranch, ImageCountConvention, NumericsControl, Scenario, Twist};
pub use probability::{assemble_probabilities, sweep_mass, sweep_position, ResponseSet, SweepOptions};
pub use response::{response_interference, response_oracle, response_single, ResponseValue};
pub use spectrum::{interference_from_spectrum, response_from_spectrum, w_hat_12, w_hat_btz, SpectrumSample};
