//! Geodesic integration, parallel transport of tetrads and the free-particle
//! launch experiment.

mod experiment;
mod integrator;
mod transport;

pub use experiment::{free_particle_experiment, launch_velocity, ExperimentReport, LaunchCase};
pub use integrator::{
    format_sig17, integrate_geodesic, integrate_geodesic_span, GeodesicPath, GeodesicSample, IntegratorStats,
    StepControl, Termination, DEFAULT_ADAPTIVE_TOLERANCE, MAX_STEPS,
};
pub use transport::{
    diagonal_tetrad, orthonormality_defect, parallel_transport_tetrad, tetrad_from_velocity, TransportedTetrad,
    ORTHONORMAL_TOLERANCE,
};
