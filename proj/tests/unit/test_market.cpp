#include "herdsim/errors.hpp"
#include "herdsim/market.hpp"
#include "herdsim/stats.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace herdsim;
using doctest::Approx;

namespace {

TimeSeries grid_series(std::size_t n, double dt, const std::function<double(double)>& f,
                       const std::string& name = "p") {
    TimeSeries ts({name});
    for (std::size_t i = 0; i < n; ++i) {
        const double t = dt * static_cast<double>(i);
        ts.t.push_back(t);
        ts.columns[0].push_back(f(t));
    }
    return ts;
}

}  // namespace

TEST_CASE("log-price examples") {
    CHECK(log_price({0.3, 0.0}, 1.0) == 0.0);
    CHECK(log_price({0.2, 0.5}, 1.0) == Approx(2.0));
    CHECK(log_price({0.5, -1.0}, 2.0) == Approx(-2.0));
    CHECK_THROWS_AS(log_price({1e-9, 0.5}, 1.0), DomainError);
}

TEST_CASE("log-price sign follows mood and scales with r0_bar") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const MacroState s{1e-6 + (1 - 2e-6) * u(rng), 2 * u(rng) - 1};
        const double p = log_price(s, 1.0);
        CHECK((p > 0) == (s.xi > 0));
        CHECK((p < 0) == (s.xi < 0));
        const double c = 0.5 + 3 * u(rng);
        CHECK(log_price(s, c) == Approx(c * p).epsilon(1e-14));
        const MacroState s2{1e-6 + (1 - 2e-6) * u(rng), 2 * u(rng) - 1};
        CHECK(endogenous_return(log_price(s, c), log_price(s2, c)) ==
              Approx(c * endogenous_return(p, log_price(s2, 1.0))).epsilon(1e-12));
    }
}

TEST_CASE("endogenous return examples") {
    CHECK(endogenous_return(1.3, 1.3) == 0.0);
    CHECK(endogenous_return(2.0, 0.5) == Approx(1.5));
    CHECK(endogenous_return(0.5, 2.0) == -endogenous_return(2.0, 0.5));
}

TEST_CASE("Gaussian return moments") {
    Engine rng = make_stream(2);
    MarketParams m;
    CHECK(gaussian_return(m, 1.0, rng) == 0.0);
    m.mu = 0.1;
    CHECK(gaussian_return(m, 1.0, rng) == Approx(0.1));

    m.mu = 0.0;
    m.sigma = 1.0;
    const int n = 1000000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = gaussian_return(m, 1.0, rng);
        sum += r;
        sq += r * r;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean + 0.5) < 0.005);
    CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("r0 scale") {
    CHECK(r0_scale(0.0, 2.0, 0.3) == 0.3);
    CHECK(r0_scale(-5.0, 0.0, 0.3) == 0.3);
    // Expressed per sqrt(T): a sqrt(T) = 0.16, b sqrt(T) = 0.9.
    CHECK(r0_scale(1.0, 0.16, 0.9) == Approx(1.06));
    CHECK(r0_scale(-1.0, 0.16, 0.9) == Approx(1.06));
}

TEST_CASE("q-Gaussian sampler") {
    Engine rng = make_stream(3);
    CHECK(q_gaussian_sample(0.0, 5.0, rng) == 0.0);
    CHECK_THROWS_AS(q_gaussian_sample(1.0, 3.0, rng), DomainError);

    std::vector<double> v(1000000);
    for (double& x : v) x = q_gaussian_sample(1.0, 5.0, rng);

    const oracle::QGaussianCdf cdf(1.0, 5.0);
    CHECK(ks_distance(v, [&](double x) { return cdf(x); }) < 0.01);

    std::vector<double> a(v.size());
    std::transform(v.begin(), v.end(), a.begin(), [](double x) { return std::abs(x); });
    // At k = 1% the Student-t correction terms still bias Hill low; compare with the
    // estimator's own large-sample limit for this law.
    const auto hill = hill_tail_exponent(a, 10000);
    const double limit = oracle::q_gaussian_hill_limit(5.0, 0.01);
    CHECK(limit < 5.0);
    CHECK(std::abs(hill.pdf_exponent - limit) < 3 * hill.std_error);

    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double se = std::sqrt(var / v.size() / v.size());
    CHECK(std::abs(mean) < 5 * se);
}

TEST_CASE("q-Gaussian density agrees with the quadrature CDF") {
    const oracle::QGaussianCdf cdf(0.7, 5.0);
    for (double r : {-2.0, -0.5, 0.1, 0.9, 3.0}) {
        const double h = 1e-4;
        const double numeric = (cdf(r + h) - cdf(r - h)) / (2 * h);
        CHECK(q_gaussian_density(r, 0.7, 5.0) == Approx(numeric).epsilon(1e-3));
    }
}

TEST_CASE("moving average examples") {
    const double dt = 0.01;
    const auto c = grid_series(500, dt, [](double) { return 2.5; });
    const auto flat = moving_average(c, 0.1);
    for (double v : flat.columns[0]) CHECK(v == Approx(2.5));

    const auto ramp = grid_series(500, dt, [](double t) { return t; });
    const double T = 0.2;
    const auto ma = moving_average(ramp, T);
    CHECK(ma.t.front() == Approx(T));
    for (std::size_t i = 0; i < ma.size(); ++i) {
        // Grid mean over the trailing window, within half a sample of t - T/2.
        CHECK(std::abs(ma.columns[0][i] - (ma.t[i] - T / 2)) <= dt / 2 + 1e-12);
    }

    const auto id = moving_average(ramp, dt);
    for (std::size_t i = 0; i < id.size(); ++i) CHECK(id.columns[0][i] == Approx(id.t[i]));

    CHECK_THROWS_AS(moving_average(ramp, 0.5 * dt), ConfigError);
}

TEST_CASE("moving average is shift equivariant") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, 1.0);
    auto s = grid_series(300, 0.1, [&](double) { return g(rng); });
    const auto base = moving_average(s, 1.0);

    TimeSeries shifted = s;
    for (double& v : shifted.columns[0]) v += 3.0;
    for (double& t : shifted.t) t += 7.0;
    const auto moved = moving_average(shifted, 1.0);
    REQUIRE(moved.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(moved.columns[0][i] == Approx(base.columns[0][i] + 3.0).epsilon(1e-12));
        CHECK(moved.t[i] == Approx(base.t[i] + 7.0));
    }
}

TEST_CASE("returns with pure exogenous noise") {
    std::mt19937_64 walk_rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    double x = 0.0;
    const auto prices = grid_series(2000001, 0.01, [&](double) { return x += 0.1 * g(walk_rng); });
    MarketParams m;
    m.a = 0.0;
    m.b = 0.5;
    m.window_T = 0.02;
    Engine rng = make_stream(6);
    const auto r = synthesize_returns(prices, m, rng);
    CHECK(r.size() == 1000000);
    CHECK(r.dt() == Approx(0.02));

    std::vector<double> a;
    for (double v : r.columns[0]) a.push_back(std::abs(v));
    const auto hill = hill_tail_exponent(a, 10000);
    CHECK(std::abs(hill.pdf_exponent - oracle::q_gaussian_hill_limit(5.0, 0.01)) < 3 * hill.std_error);
    const oracle::QGaussianCdf cdf(0.5 * std::sqrt(0.02), 5.0);
    CHECK(ks_distance(r.columns[0], [&](double v) { return cdf(v); }) < 0.01);
}

TEST_CASE("returns with frozen price and no floor") {
    const auto prices = grid_series(400001, 0.01, [](double) { return -1.5; });
    MarketParams m;
    m.a = 0.4;
    m.b = 0.0;
    m.window_T = 0.04;
    Engine rng = make_stream(7);
    const auto r = synthesize_returns(prices, m, rng);
    const oracle::QGaussianCdf cdf(0.4 * 1.5 * 0.2, 5.0);
    CHECK(ks_distance(r.columns[0], [&](double v) { return cdf(v); }) < 0.02);
}

TEST_CASE("returns are deterministic and need two windows") {
    const auto prices = grid_series(1000, 0.01, [](double t) { return std::sin(t); });
    MarketParams m;
    m.window_T = 0.05;
    Engine a = make_stream(8), b = make_stream(8);
    CHECK(synthesize_returns(prices, m, a).columns == synthesize_returns(prices, m, b).columns);

    m.window_T = 5.0;
    Engine c = make_stream(8);
    CHECK_THROWS_AS(synthesize_returns(prices, m, c), InsufficientData);
}
