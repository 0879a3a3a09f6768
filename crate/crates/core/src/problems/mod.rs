//! Problem instances, the proximal-operator library, synthetic data
//! generators and LIBSVM ingestion.

pub mod generators;
mod instance;
pub mod libsvm;
pub mod logistic;
mod prox;
pub mod rng;

pub use generators::{gen_bilinear_game, gen_cournot_nash, gen_quadratic_minimax, BilinearGame, CournotNash, QuadraticMinimax};
pub use instance::{EvalCounts, JacobianFn, ObjectiveFn, OperatorFn, ProblemInstance};
pub use libsvm::{parse_libsvm, LabeledSparseData};
pub use logistic::{load_logistic, logistic_instance};
pub use prox::{project_simplex, soft_threshold, ProxFn, ProxSpec};
