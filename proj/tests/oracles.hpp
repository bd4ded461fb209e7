#pragma once

// Independent oracles for the test suites. Everything here is deliberately
// written on a different code path than the library: brute force, dense
// factorizations, naive two-pass formulas. Do not reuse library internals.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace oracles {

// Classical RK4 for the Lorenz system, restated from scratch.
inline std::vector<double> lorenz_rk4(double sigma, double rho, double beta, double dt,
                                      std::array<double, 3> state, std::size_t steps,
                                      std::size_t skip, int observe) {
    const auto f = [&](const std::array<double, 3>& s) {
        return std::array<double, 3>{sigma * (s[1] - s[0]), s[0] * (rho - s[2]) - s[1],
                                     s[0] * s[1] - beta * s[2]};
    };
    std::vector<double> out;
    for (std::size_t i = 0; i < skip + steps; ++i) {
        if (i >= skip) out.push_back(state[static_cast<std::size_t>(observe)]);
        const auto k1 = f(state);
        std::array<double, 3> t;
        for (int d = 0; d < 3; ++d) t[static_cast<std::size_t>(d)] = state[static_cast<std::size_t>(d)] + 0.5 * dt * k1[static_cast<std::size_t>(d)];
        const auto k2 = f(t);
        for (int d = 0; d < 3; ++d) t[static_cast<std::size_t>(d)] = state[static_cast<std::size_t>(d)] + 0.5 * dt * k2[static_cast<std::size_t>(d)];
        const auto k3 = f(t);
        for (int d = 0; d < 3; ++d) t[static_cast<std::size_t>(d)] = state[static_cast<std::size_t>(d)] + dt * k3[static_cast<std::size_t>(d)];
        const auto k4 = f(t);
        for (int d = 0; d < 3; ++d) {
            const auto u = static_cast<std::size_t>(d);
            state[u] += (dt / 6.0) * (k1[u] + 2.0 * k2[u] + 2.0 * k3[u] + k4[u]);
        }
    }
    return out;
}

// Lorenz sampled at dt, computed on a grid refined by `refine`.
inline std::vector<double> lorenz_refined(double dt, std::size_t n, int refine,
                                          std::array<double, 3> init = {1.0, 1.0, 1.0},
                                          std::size_t skip = 0) {
    const auto fine = lorenz_rk4(10.0, 28.0, 8.0 / 3.0, dt / refine,
                                 init, (n + skip) * static_cast<std::size_t>(refine), 0, 0);
    std::vector<double> out;
    for (std::size_t i = skip * static_cast<std::size_t>(refine); out.size() < n;
         i += static_cast<std::size_t>(refine))
        out.push_back(fine[i]);
    return out;
}

// Naive two-pass RMSE.
inline double rmse_naive(std::span<const double> a, std::span<const double> b) {
    std::vector<double> sq(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) sq[i] = (a[i] - b[i]) * (a[i] - b[i]);
    double total = 0.0;
    for (double v : sq) total += v;
    return std::sqrt(total / static_cast<double>(sq.size()));
}

// Ridge regression through the SVD: w = V diag(s/(s^2 + ridge)) U^T y for the
// design S^T (columns of S are samples). A different algebraic route than the
// library's normal equations.
inline Eigen::VectorXd ridge_svd(const Eigen::MatrixXd& states, const Eigen::VectorXd& targets,
                                 double ridge) {
    const Eigen::MatrixXd design = states.transpose();  // T x L
    Eigen::BDCSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd s = svd.singularValues();
    Eigen::VectorXd coeff = svd.matrixU().transpose() * targets;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        coeff[i] *= s[i] / (s[i] * s[i] + ridge);
    return svd.matrixV() * coeff;
}

// Ridge regression by brute force: accumulate the gram matrix entry by entry
// and solve the normal equations with a full-pivot LU factorization.
inline Eigen::VectorXd ridge_normal_lu(const Eigen::MatrixXd& states,
                                       const Eigen::VectorXd& targets, double ridge) {
    const Eigen::Index n = states.rows(), t = states.cols();
    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            double s = 0.0;
            for (Eigen::Index k = 0; k < t; ++k) s += states(i, k) * states(j, k);
            gram(i, j) = s + (i == j ? ridge : 0.0);
        }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < t; ++k) rhs[i] += states(i, k) * targets[k];
    return gram.fullPivLu().solve(rhs);
}

// Spectral radius from the full dense eigendecomposition.
inline double spectral_radius_dense(const Eigen::MatrixXd& a) {
    return Eigen::EigenSolver<Eigen::MatrixXd>(a, false).eigenvalues().cwiseAbs().maxCoeff();
}

// Sliding median by sorting every window outright.
inline std::vector<double> median_brute(const std::vector<double>& x, int window) {
    const int h = window / 2;
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    std::vector<double> out(x.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        std::vector<double> w;
        for (int j = -h; j <= h; ++j)
            w.push_back(x[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i + j, 0, n - 1))]);
        std::sort(w.begin(), w.end());
        out[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(h)];
    }
    return out;
}

// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace oracles
