#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "ssrc/errors.hpp"
#include "ssrc/metrics.hpp"
#include "ssrc/rng.hpp"

using namespace ssrc;

TEST_CASE("rmse basics") {
    std::vector<double> a{1.0, 2.0, 3.0};
    CHECK(rmse(a, a) == 0.0);

    std::vector<double> b{3.0, 4.0, 5.0};
    CHECK(rmse(a, b) == doctest::Approx(2.0));

    std::vector<double> c{1.0, 2.0};
    CHECK_THROWS_AS(rmse(a, c), ContractError);
}

TEST_CASE("rmse matches the naive two-pass oracle") {
    Rng rng(11);
    std::vector<double> a(1000), b(1000);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = standard_normal(rng) * 10.0;
        b[i] = standard_normal(rng) * 0.1 + 5.0;
    }
    CHECK(rmse(a, b) == doctest::Approx(oracles::rmse_naive(a, b)).epsilon(1e-12));
}

TEST_CASE("rmse triangle-style bound on random triples") {
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(64), b(64), c(64);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = standard_normal(rng);
            b[i] = standard_normal(rng);
            c[i] = standard_normal(rng);
        }
        CHECK(rmse(a, c) <= rmse(a, b) + rmse(b, c) + 1e-12);
    }
}

TEST_CASE("histogram examples") {
    std::vector<double> two{0.0, 1.0};
    const Histogram h = histogram(two, 2, std::pair{0.0, 1.0});
    CHECK(h.masses[0] == doctest::Approx(0.5));
    CHECK(h.masses[1] == doctest::Approx(0.5));

    std::vector<double> clustered{0.5, 0.5, 0.5};
    const Histogram one = histogram(clustered, 4, std::pair{0.0, 1.0});
    CHECK(one.masses[2] == doctest::Approx(1.0));

    CHECK_THROWS_AS(histogram(std::vector<double>{}, 4), ContractError);
}

TEST_CASE("histogram of gaussian samples matches analytic bin probabilities") {
    Rng rng(5);
    std::vector<double> samples(1000000);
    for (double& s : samples) s = standard_normal(rng);
    const Histogram h = histogram(samples, 50, std::pair{-4.0, 4.0});
    const double in_range = oracles::normal_cdf(4.0) - oracles::normal_cdf(-4.0);
    for (std::size_t b = 0; b < 50; ++b) {
        const double expected = (oracles::normal_cdf(h.bin_edges[b + 1]) -
                                 oracles::normal_cdf(h.bin_edges[b])) /
                                in_range;
        CHECK(std::abs(h.masses[b] - expected) < 0.005);
    }
}

TEST_CASE("histogram is permutation stable") {
    Rng rng(6);
    std::vector<double> samples(5000);
    for (double& s : samples) s = standard_normal(rng);
    const Histogram a = histogram(samples, 20);
    std::reverse(samples.begin(), samples.end());
    const Histogram b = histogram(samples, 20);
    CHECK(a.masses == b.masses);
    CHECK(a.bin_edges == b.bin_edges);
}

TEST_CASE("jsd hand-computed value and bounds") {
    Histogram p, q;
    p.bin_edges = q.bin_edges = {0.0, 0.5, 1.0};
    p.masses = {0.5, 0.5};
    q.masses = {1.0, 0.0};

    // Direct formula: m = (0.75, 0.25),
    // 0.5*KL(p||m) + 0.5*KL(q||m) with base-2 logs.
    const double kl_pm = 0.5 * std::log2(0.5 / 0.75) + 0.5 * std::log2(0.5 / 0.25);
    const double kl_qm = 1.0 * std::log2(1.0 / 0.75);
    const double expected = 0.5 * kl_pm + 0.5 * kl_qm;
    CHECK(expected == doctest::Approx(0.3112781244591328).epsilon(1e-12));
    CHECK(jsd(p, q) == doctest::Approx(expected).epsilon(1e-12));

    CHECK(jsd(p, p) == 0.0);
    CHECK(jsd(p, q) == jsd(q, p));

    Histogram disjoint_a = p, disjoint_b = p;
    disjoint_a.masses = {1.0, 0.0};
    disjoint_b.masses = {0.0, 1.0};
    CHECK(jsd(disjoint_a, disjoint_b) == doctest::Approx(1.0));

    Histogram other;
    other.bin_edges = {0.0, 1.0, 2.0};
    other.masses = {0.5, 0.5};
    CHECK_THROWS_AS(jsd(p, other), ContractError);
}

TEST_CASE("jsd stays within [0,1] on random histogram pairs") {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(300), b(300);
        for (double& v : a) v = standard_normal(rng);
        for (double& v : b) v = standard_normal(rng) * uniform_in(rng, 0.2, 3.0) + uniform_in(rng, -2.0, 2.0);
        const auto [p, q] = shared_histograms(a, b, 30);
        const double d = jsd(p, q);
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
        CHECK(jsd(q, p) == d);
    }
}

TEST_CASE("bimodality detector separates one hump from two") {
    Rng rng(9);
    std::vector<double> unimodal(20000), bimodal(20000);
    for (double& v : unimodal) v = standard_normal(rng);
    for (double& v : bimodal) {
        const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
        v = sign * 1.0 + 0.25 * standard_normal(rng);
    }
    CHECK_FALSE(histogram_bimodal(unimodal));
    CHECK(histogram_bimodal(bimodal));
}
