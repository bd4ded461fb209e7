#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <span>

#include "ssrc/series.hpp"

namespace ssrc {

/// Echo State Network hyperparameters.
///
/// The recurrent matrix has `connectivity` fraction of nonzero entries and is
/// rescaled to the requested spectral radius. Only the linear readout is
/// trained, by ridge regression with coefficient `ridge`. The first `washout`
/// states are excluded from training to flush the zero initial state.
struct EsnParams {
    int reservoir_size = 200;
    double spectral_radius = 0.9;
    double leak = 0.3;           // in (0,1]; 1 = no leak integration
    double input_scale = 1.0;
    double connectivity = 0.05;  // in (0,1]
    double ridge = 1e-6;
    int washout = 100;
    std::uint64_t seed = 0;
};

/// Fixed random recurrent network: internal weights and input weights.
struct Reservoir {
    Eigen::SparseMatrix<double> weights;  // L x L
    Eigen::VectorXd input_weights;        // L
};

/// Reservoir states collected over a drive. Column j holds the state reached
/// after consuming x_j; under the one-step-ahead convention it is the
/// regressor for target x_{j+1}. For an input of length N+1 there are N columns.
struct StateTrajectory {
    Eigen::MatrixXd states;  // L x N
};

struct Readout {
    Eigen::VectorXd weights;  // L
};

/// Largest absolute eigenvalue, by power iteration with a two-term Krylov
/// extraction (handles a dominant complex-conjugate pair) and random restarts.
double spectral_radius(const Eigen::SparseMatrix<double>& a);
double spectral_radius(const Eigen::MatrixXd& a);

/// Draw the random reservoir for `params`; deterministic in params.seed.
/// Entries of the recurrent matrix are nonzero independently with probability
/// `connectivity`, uniform on [-1,1], then rescaled so the spectral radius
/// matches params.spectral_radius to 1e-6 relative.
Reservoir build_reservoir(const EsnParams& params);

/// Leaky-tanh state recurrence driven by x:
///   r <- (1 - leak) * r + leak * tanh(A r + w_in * x_j)
/// starting from the zero state (or `initial_state` when given).
StateTrajectory run_states(const Reservoir& reservoir, const EsnParams& params,
                           const TimeSeries& x, const Eigen::VectorXd* initial_state = nullptr);

/// Solve (S S^T + ridge I) w = S y for the readout on the given state block.
/// Washout and range selection are the caller's job: `states` columns must
/// align one-to-one with `targets`.
Readout train_readout(const Eigen::Ref<const Eigen::MatrixXd>& states,
                      std::span<const double> targets, double ridge);

/// Readout applied to every column: values[j] = w . states.col(j), the
/// one-step estimate of the sample following input j.
TimeSeries reconstruct(const Readout& readout, const StateTrajectory& trajectory);

}  // namespace ssrc
