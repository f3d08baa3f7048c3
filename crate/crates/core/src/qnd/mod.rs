//! Photon-number QND readout: material constants, the single-photon Rabi
//! frequency, cross-Kerr phase shifts, probe evolution in the Fock basis and
//! Husimi Q-functions.

pub mod constants;
mod kerr;
mod material;
mod probe;
mod qfunc;

pub use kerr::{
    k_equal_ab, k_equal_cd, k_weak, phase_shift_kab, phase_shift_kcd, single_photon_rabi,
    t_scalings, CoherenceMode, PhaseShiftModel, TScalings,
};
pub use material::{table_group_velocity_reference, MaterialParams};
pub use probe::{
    default_n_max, distinguishability, evolve_probe, evolve_with_phases, Distinguishability,
    EvolveOptions, ProbeState, TimeModel, TRUNCATION_TAIL,
};
pub use qfunc::{q_function, QGrid, QWindow};
