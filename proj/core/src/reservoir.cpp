#include "ssrc/reservoir.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "ssrc/errors.hpp"
#include "ssrc/rng.hpp"

namespace ssrc {

namespace {

constexpr long kMaxMatVecs = 100000;
constexpr int kMaxRestarts = 5;
constexpr Eigen::Index kBlock = 8;

// Block power (subspace) iteration with a small Rayleigh-Ritz extraction.
// A plain power vector cannot see the modulus of a dominant complex pair and
// crawls when leading moduli cluster; a block of 8 with an 8x8 dense
// eigensolve handles both while staying matvec-cheap.
template <typename MatVec>
double spectral_radius_impl(Eigen::Index n, const MatVec& apply) {
    if (n == 0) throw ContractError("spectral_radius: empty matrix");
    const Eigen::Index block = std::min(kBlock, n);
    Rng rng(0x5eedULL);
    long matvecs = 0;

    for (int restart = 0; restart < kMaxRestarts; ++restart) {
        Eigen::Index width = block;
        Eigen::MatrixXd basis(n, width);
        for (Eigen::Index j = 0; j < width; ++j)
            for (Eigen::Index i = 0; i < n; ++i) basis(i, j) = standard_normal(rng);
        basis = Eigen::HouseholderQR<Eigen::MatrixXd>(basis).householderQ() *
                Eigen::MatrixXd::Identity(n, width);

        double prev = -1.0;
        int stable = 0;
        while (matvecs < kMaxMatVecs) {
            Eigen::MatrixXd image(n, width);
            for (Eigen::Index j = 0; j < width; ++j) image.col(j) = apply(basis.col(j));
            matvecs += width;

            // A numerically nilpotent map drives every block to zero.
            if (image.norm() <= 1e-150) return 0.0;

            // Ritz values of the projected map.
            const Eigen::MatrixXd projected = basis.transpose() * image;
            const double estimate =
                Eigen::EigenSolver<Eigen::MatrixXd>(projected, false)
                    .eigenvalues()
                    .cwiseAbs()
                    .maxCoeff();

            const double scale = std::max(estimate, 1e-300);
            if (std::abs(estimate - prev) <= 1e-11 * scale) {
                if (++stable >= 5) return estimate;
            } else {
                stable = 0;
            }
            prev = estimate;

            // Rank-revealing orthonormalization; dropping dead directions keeps
            // rank-deficient maps (nilpotent part, low-rank A) from recycling
            // junk basis vectors forever.
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(image);
            const Eigen::Index rank = std::max<Eigen::Index>(qr.rank(), 1);
            width = std::min(width, rank);
            basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, width);
        }
    }
    throw ConvergenceError("spectral_radius: no convergence within iteration budget");
}

}  // namespace

double spectral_radius(const Eigen::SparseMatrix<double>& a) {
    if (a.rows() != a.cols()) throw ContractError("spectral_radius: matrix must be square");
    return spectral_radius_impl(a.rows(), [&](const Eigen::VectorXd& x) { return a * x; });
}

double spectral_radius(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw ContractError("spectral_radius: matrix must be square");
    return spectral_radius_impl(a.rows(), [&](const Eigen::VectorXd& x) { return a * x; });
}

Reservoir build_reservoir(const EsnParams& params) {
    const int n = params.reservoir_size;
    if (n < 1) throw ContractError("build_reservoir: reservoir_size must be >= 1");
    if (!(params.connectivity > 0.0 && params.connectivity <= 1.0))
        throw ContractError("build_reservoir: connectivity in (0,1]");
    if (!(params.spectral_radius > 0.0))
        throw ContractError("build_reservoir: spectral_radius must be positive");
    if (!(params.leak > 0.0 && params.leak <= 1.0))
        throw ContractError("build_reservoir: leak in (0,1]");
    if (!(params.input_scale > 0.0))
        throw ContractError("build_reservoir: input_scale must be positive");

    Reservoir res;
    for (int attempt = 0;; ++attempt) {
        if (attempt > 10)
            throw DegenerateInputError("build_reservoir: sampled an all-zero matrix 10 times");
        Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(attempt)));
        std::vector<Eigen::Triplet<double>> entries;
        entries.reserve(static_cast<std::size_t>(params.connectivity * n * n * 1.1) + 8);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (uniform01(rng) < params.connectivity)
                    entries.emplace_back(i, j, uniform_in(rng, -1.0, 1.0));

        res.weights.resize(n, n);
        res.weights.setFromTriplets(entries.begin(), entries.end());
        res.input_weights.resize(n);
        for (int i = 0; i < n; ++i) res.input_weights[i] = uniform_in(rng, -params.input_scale,
                                                                      params.input_scale);
        if (entries.empty()) continue;
        const double rho = spectral_radius(res.weights);
        if (rho <= 0.0) continue;  // nonzero entries can still be nilpotent at tiny sizes
        res.weights *= params.spectral_radius / rho;
        return res;
    }
}

StateTrajectory run_states(const Reservoir& reservoir, const EsnParams& params,
                           const TimeSeries& x, const Eigen::VectorXd* initial_state) {
    if (x.size() < 2) throw ContractError("run_states: need at least 2 samples");
    const Eigen::Index n = reservoir.weights.rows();
    if (reservoir.input_weights.size() != n)
        throw ContractError("run_states: reservoir dimensions disagree");
    const double leak = params.leak;

    Eigen::VectorXd r = initial_state ? *initial_state : Eigen::VectorXd::Zero(n);
    if (r.size() != n) throw ContractError("run_states: initial state has wrong dimension");

    const Eigen::Index steps = static_cast<Eigen::Index>(x.size()) - 1;
    StateTrajectory out;
    out.states.resize(n, steps);
    Eigen::VectorXd pre(n);
    for (Eigen::Index j = 0; j < steps; ++j) {
        pre.noalias() = reservoir.weights * r;
        pre += reservoir.input_weights * x[static_cast<std::size_t>(j)];
        r = (1.0 - leak) * r + leak * pre.array().tanh().matrix();
        out.states.col(j) = r;
    }
    return out;
}

Readout train_readout(const Eigen::Ref<const Eigen::MatrixXd>& states,
                      std::span<const double> targets, double ridge) {
    if (static_cast<std::size_t>(states.cols()) != targets.size())
        throw ContractError("train_readout: one target per state column required");
    if (states.cols() == 0) throw ContractError("train_readout: empty training block");
    if (ridge < 0.0) throw ContractError("train_readout: ridge must be nonnegative");

    const Eigen::Index n = states.rows();
    Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n, n);
    lower.selfadjointView<Eigen::Lower>().rankUpdate(states);
    Eigen::MatrixXd gram = lower.selfadjointView<Eigen::Lower>();
    gram.diagonal().array() += ridge;

    const Eigen::Map<const Eigen::VectorXd> y(targets.data(),
                                              static_cast<Eigen::Index>(targets.size()));
    const Eigen::VectorXd rhs = states * y;

    const auto ldlt = gram.ldlt();
    const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
    if (ridge == 0.0 && pivots.minCoeff() < 1e-12 * pivots.maxCoeff())
        throw IllConditionedError(
            "train_readout: singular normal equations with ridge 0; use a positive ridge");

    Readout out;
    out.weights = ldlt.solve(rhs);
    const double rhs_norm = rhs.norm();
    const double residual = (gram * out.weights - rhs).norm();
    if (!out.weights.allFinite() || residual > 1e-8 * std::max(rhs_norm, 1e-12))
        throw IllConditionedError("train_readout: normal equations solve failed");
    return out;
}

TimeSeries reconstruct(const Readout& readout, const StateTrajectory& trajectory) {
    if (readout.weights.size() != trajectory.states.rows())
        throw ContractError("reconstruct: readout dimension does not match states");
    TimeSeries out;
    out.values.resize(static_cast<std::size_t>(trajectory.states.cols()));
    Eigen::Map<Eigen::VectorXd> y(out.values.data(), trajectory.states.cols());
    y.noalias() = trajectory.states.transpose() * readout.weights;
    return out;
}

}  // namespace ssrc
