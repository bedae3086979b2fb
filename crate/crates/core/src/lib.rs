//! Proximity operators for the OSCAR regularizer and proximal splitting solvers for
//! `min_x 0.5 * ||y - A x||^2 + lambda1 ||x||_1 + lambda2 sum_{i<j} max(|x_i|, |x_j|)`.

pub mod error;
pub mod experiments;
pub mod linalg;
pub mod prox;
pub mod solvers;

pub use error::{OscarError, Result};
pub use linalg::{DenseMatrix, GramSolver};
pub use prox::{
    apo_condition_holds, brute_force_prox_oracle, group_and_average, oscar_apo, oscar_gpo,
    oscar_value, oscar_value_pairwise, soft_threshold, soft_threshold_each, sort_by_magnitude,
    weight_vector, GroupPartition, OscarParams, SortedDecomposition, WeightVector,
};
pub use solvers::{mae_mse, solve, Problem, ProxStepKind, SolverConfig, SolverKind, SolverRun};
