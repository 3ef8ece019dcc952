//! Entanglement dynamics of two atoms, each coupled to its own Lorentzian
//! reservoir, in the single-excitation sector.
//!
//! Time is measured in units of `1/W` wherever a ratio `lambda/W` is used.

pub mod amplitudes;
pub mod criteria;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod states;

pub use amplitudes::{
    amplitude_state, c1_closed, c2_closed, coupling_regime, AmplitudeState, CouplingRegime,
    PhysicalParams,
};
pub use criteria::{
    classify_ordering, count_esd, count_events_numeric, count_revivals, criteria_report,
    esd_occurs, esd_threshold, revival_interval, revival_occurs, revival_threshold, CriteriaReport,
    NumericEvents, Ordering, RevivalCount,
};
pub use entanglement::{
    concurrence_atom_reservoir_closed, concurrence_atoms_closed, concurrence_cross_pair,
    concurrence_reservoirs_closed, i_concurrence, multipartite_concurrence, wootters_concurrence,
    ConcurrenceValue,
};
pub use error::{Error, Result};
pub use states::{
    build_joint_state, linear_entropy, partial_trace, purity, reduced_pair, DensityMatrix,
    JointState, Pair, Partition, Qubit,
};
