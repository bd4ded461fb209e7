#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>

#include "oracles.hpp"
#include "ssrc/errors.hpp"
#include "ssrc/generators.hpp"
#include "ssrc/metrics.hpp"
#include "ssrc/model_io.hpp"
#include "ssrc/reservoir.hpp"
#include "ssrc/rng.hpp"
#include "ssrc/series.hpp"

using namespace ssrc;

TEST_CASE("spectral radius on diagonal and scaled identity") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = 0.3;
    d(1, 1) = -0.9;
    CHECK(spectral_radius(d) == doctest::Approx(0.9).epsilon(1e-8));

    const Eigen::MatrixXd c = -2.5 * Eigen::MatrixXd::Identity(6, 6);
    CHECK(spectral_radius(c) == doctest::Approx(2.5).epsilon(1e-8));

    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 4);
    CHECK(spectral_radius(zero) == 0.0);
}

TEST_CASE("spectral radius matches the dense eigensolver oracle") {
    Rng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd a(100, 100);
        for (int i = 0; i < 100; ++i)
            for (int j = 0; j < 100; ++j)
                a(i, j) = uniform01(rng) < 0.1 ? uniform_in(rng, -1.0, 1.0) : 0.0;
        const double expected = oracles::spectral_radius_dense(a);
        CHECK(spectral_radius(a) == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("build_reservoir 1x1 rescale") {
    EsnParams p;
    p.reservoir_size = 1;
    p.connectivity = 1.0;
    p.spectral_radius = 0.5;
    const Reservoir r = build_reservoir(p);
    REQUIRE(r.weights.nonZeros() == 1);
    CHECK(std::abs(r.weights.coeff(0, 0)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("build_reservoir hits the requested spectral radius") {
    EsnParams p;
    p.reservoir_size = 100;
    p.spectral_radius = 0.9;
    p.seed = 4;
    const Reservoir r = build_reservoir(p);
    const Eigen::MatrixXd dense(r.weights);
    CHECK(oracles::spectral_radius_dense(dense) == doctest::Approx(0.9).epsilon(1e-6));

    // connectivity is respected on average
    const double density =
        static_cast<double>(r.weights.nonZeros()) / (100.0 * 100.0);
    CHECK(density == doctest::Approx(p.connectivity).epsilon(0.35));
}

TEST_CASE("build_reservoir is deterministic in the seed") {
    EsnParams p;
    p.reservoir_size = 50;
    p.seed = 123;
    const Reservoir a = build_reservoir(p);
    const Reservoir b = build_reservoir(p);
    CHECK((Eigen::MatrixXd(a.weights) - Eigen::MatrixXd(b.weights)).norm() == 0.0);
    CHECK((a.input_weights - b.input_weights).norm() == 0.0);

    p.seed = 124;
    const Reservoir c = build_reservoir(p);
    CHECK((Eigen::MatrixXd(a.weights) - Eigen::MatrixXd(c.weights)).norm() != 0.0);
}

namespace {
Reservoir scalar_reservoir(double recurrent, double input) {
    Reservoir r;
    r.weights.resize(1, 1);
    if (recurrent != 0.0) r.weights.insert(0, 0) = recurrent;
    r.input_weights = Eigen::VectorXd::Constant(1, input);
    return r;
}
}  // namespace

TEST_CASE("run_states zero input keeps the zero state") {
    EsnParams p;
    p.reservoir_size = 8;
    p.seed = 3;
    const Reservoir r = build_reservoir(p);
    TimeSeries x;
    x.values.assign(50, 0.0);
    const StateTrajectory s = run_states(r, p, x);
    CHECK(s.states.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("run_states scalar evaluation") {
    EsnParams p;
    p.leak = 1.0;
    const Reservoir r = scalar_reservoir(0.0, 1.0);
    TimeSeries x(std::vector<double>{0.5, 0.0});
    const StateTrajectory s = run_states(r, p, x);
    CHECK(s.states(0, 0) == doctest::Approx(0.46211715726000974).epsilon(1e-12));
}

TEST_CASE("run_states matches a hand-rolled scalar recurrence") {
    EsnParams p;
    p.leak = 0.5;
    const double a_w = 0.7, w_in = 0.5;
    const Reservoir r = scalar_reservoir(a_w, w_in);
    TimeSeries x;
    Rng rng(9);
    for (int i = 0; i < 40; ++i) x.values.push_back(uniform_in(rng, -1.0, 1.0));
    const StateTrajectory s = run_states(r, p, x);

    double state = 0.0;
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
        state = (1.0 - p.leak) * state + p.leak * std::tanh(a_w * state + w_in * x[j]);
        CHECK(s.states(0, static_cast<Eigen::Index>(j)) == doctest::Approx(state).epsilon(1e-12));
    }
}

TEST_CASE("run_states entries stay in [-1,1] when leak is 1") {
    EsnParams p;
    p.reservoir_size = 30;
    p.leak = 1.0;
    p.seed = 8;
    const Reservoir r = build_reservoir(p);
    TimeSeries x;
    Rng rng(10);
    for (int i = 0; i < 500; ++i) x.values.push_back(standard_normal(rng) * 3.0);
    const StateTrajectory s = run_states(r, p, x);
    CHECK(s.states.maxCoeff() <= 1.0);
    CHECK(s.states.minCoeff() >= -1.0);
}

TEST_CASE("echo state fading memory") {
    // Two state sequences driven by the same input from different starting
    // points converge once the transient washes out.
    EsnParams p;
    p.reservoir_size = 60;
    p.spectral_radius = 0.9;
    p.leak = 0.5;
    p.seed = 5;
    const Reservoir r = build_reservoir(p);
    TimeSeries x;
    Rng rng(6);
    for (int i = 0; i < 1300; ++i) x.values.push_back(standard_normal(rng));

    Eigen::VectorXd other = Eigen::VectorXd::Zero(60);
    for (int i = 0; i < 60; ++i) other[i] = uniform_in(rng, -1.0, 1.0);
    const StateTrajectory s1 = run_states(r, p, x);
    const StateTrajectory s2 = run_states(r, p, x, &other);
    for (Eigen::Index j = 1000; j < s1.states.cols(); ++j)
        CHECK((s1.states.col(j) - s2.states.col(j)).norm() < 1e-8);
}

TEST_CASE("train_readout scalar exact fit and shrinkage limit") {
    Eigen::MatrixXd states(1, 3);
    states << 1.0, 1.0, 1.0;
    std::vector<double> targets{2.0, 2.0, 2.0};
    const Readout w = train_readout(states, targets, 0.0);
    CHECK(w.weights[0] == doctest::Approx(2.0).epsilon(1e-12));

    const Readout shrunk = train_readout(states, targets, 1e12);
    CHECK(std::abs(shrunk.weights[0]) < 1e-6);
}

TEST_CASE("train_readout matches the dense SVD oracle") {
    Rng rng(13);
    Eigen::MatrixXd states(50, 500);
    Eigen::VectorXd targets(500);
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 500; ++j) states(i, j) = standard_normal(rng);
    for (int j = 0; j < 500; ++j) targets[j] = standard_normal(rng);

    for (double ridge : {1e-6, 1e-2, 1.0}) {
        const Readout w = train_readout(states, {targets.data(), 500}, ridge);
        const Eigen::VectorXd expected = oracles::ridge_svd(states, targets, ridge);
        CHECK((w.weights - expected).norm() <= 1e-8 * expected.norm());
    }
}

TEST_CASE("train_readout flags singular systems at ridge zero") {
    // Two identical rows make S S^T singular.
    Eigen::MatrixXd states(2, 40);
    Rng rng(14);
    for (int j = 0; j < 40; ++j) {
        states(0, j) = standard_normal(rng);
        states(1, j) = states(0, j);
    }
    std::vector<double> targets(40, 1.0);
    CHECK_THROWS_AS(train_readout(states, targets, 0.0), IllConditionedError);
    CHECK_NOTHROW(train_readout(states, targets, 1e-8));
}

TEST_CASE("ridge solution minimizes the regularized objective") {
    Rng rng(15);
    Eigen::MatrixXd states(20, 200);
    Eigen::VectorXd targets(200);
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 200; ++j) states(i, j) = standard_normal(rng);
    for (int j = 0; j < 200; ++j) targets[j] = standard_normal(rng);
    const double ridge = 1e-3;
    const Readout w = train_readout(states, {targets.data(), 200}, ridge);

    const auto objective = [&](const Eigen::VectorXd& v) {
        return (states.transpose() * v - targets).squaredNorm() + ridge * v.squaredNorm();
    };
    const double at_solution = objective(w.weights);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd dir(20);
        for (int i = 0; i < 20; ++i) dir[i] = standard_normal(rng);
        dir *= 1e-3 / dir.norm();
        CHECK(objective(w.weights + dir) >= at_solution);
    }
}

TEST_CASE("reconstruct basics and linearity") {
    StateTrajectory s;
    s.states.resize(1, 2);
    s.states << 0.1, 0.2;
    Readout w;
    w.weights = Eigen::VectorXd::Constant(1, 2.0);
    const TimeSeries y = reconstruct(w, s);
    CHECK(y.values == std::vector<double>{0.2 * 1.0, 0.4});

    Readout zero;
    zero.weights = Eigen::VectorXd::Zero(1);
    for (double v : reconstruct(zero, s).values) CHECK(v == 0.0);

    Readout scaled;
    scaled.weights = 3.0 * w.weights;
    const TimeSeries y3 = reconstruct(scaled, s);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(y3[i] == 3.0 * y[i]);

    Readout wrong;
    wrong.weights = Eigen::VectorXd::Zero(4);
    CHECK_THROWS_AS(reconstruct(wrong, s), ContractError);
}

TEST_CASE("noise-free sinusoid is one-step predictable end to end") {
    const TimeSeries q = standardize(gen_highfreq_sin(1.0, 5.5, 0.0, 3000)).first;
    EsnParams p;
    p.reservoir_size = 200;
    p.seed = 17;
    const Reservoir r = build_reservoir(p);
    const StateTrajectory s = run_states(r, p, q);
    const int washout = p.washout;
    const Eigen::Index cols = 2400 - washout;
    const std::span<const double> targets(q.values.data() + washout + 1,
                                          static_cast<std::size_t>(cols));
    const Readout w = train_readout(s.states.middleCols(washout, cols), targets, p.ridge);
    const TimeSeries recon = reconstruct(w, s);
    // validation range: predictions for indices 2501..2999
    std::vector<double> pred, truth;
    for (std::size_t i = 2500; i + 1 < q.size(); ++i) {
        pred.push_back(recon[i]);  // recon[j] estimates q[j+1]
        truth.push_back(q[i + 1]);
    }
    CHECK(rmse(pred, truth) < 0.01);
}

TEST_CASE("trained model survives the JSON round trip") {
    EsnParams p;
    p.reservoir_size = 12;
    p.seed = 20;
    EsnModel model;
    model.params = p;
    model.reservoir = build_reservoir(p);
    Rng rng(21);
    model.readout.weights = Eigen::VectorXd(12);
    for (int i = 0; i < 12; ++i) model.readout.weights[i] = standard_normal(rng);

    const auto path = std::filesystem::temp_directory_path() / "ssrc_model.json";
    save_esn_json(model, path);
    const EsnModel back = load_esn_json(path);
    CHECK(back.params.reservoir_size == 12);
    CHECK(back.params.seed == 20);
    CHECK((Eigen::MatrixXd(back.reservoir.weights) - Eigen::MatrixXd(model.reservoir.weights))
              .norm() == 0.0);
    CHECK((back.reservoir.input_weights - model.reservoir.input_weights).norm() == 0.0);
    CHECK((back.readout.weights - model.readout.weights).norm() == 0.0);
    std::filesystem::remove(path);
}
