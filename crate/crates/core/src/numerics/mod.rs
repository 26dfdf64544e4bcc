//! Quadrature, twisted periods, the F_D series and Euler integral, Pfaffian
//! continuation, and the verification suites built on them.

pub mod fd;
pub mod gamma;
pub mod ode;
pub mod periods;
pub mod quadrature;
pub mod verify;

pub use periods::{period, period_matrices, period_matrices_for, PeriodMatrices, PeriodSetup};
pub use quadrature::QuadratureResult;
pub use verify::{
    annihilator_residuals, frame_periods, verify_monodromy, verify_tpr, wronskian, AnnihilatorReport, GeneratorCheck,
    MonodromyCheckReport, TprReport, WronskianReport,
};
pub use fd::{euler_check, fd_series, EulerReport, SeriesValue};
pub use ode::{continuation_matrix, continue_pfaffian, generator_loop, ContinuationResult};
