#include "herdsim/errors.hpp"
#include "herdsim/kinetics.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

using namespace herdsim;
using doctest::Approx;

namespace {

TwoStateParams raw_two_state(double sigma1, double sigma2, double h, std::int64_t n, double alpha) {
    TwoStateParams p;
    p.h = h;
    p.epsilon1 = sigma1 / h;
    p.epsilon2 = sigma2 / h;
    p.n_agents = n;
    p.alpha = alpha;
    return p;
}

}  // namespace

TEST_CASE("two-state rates reduce to Kirman rates without feedback") {
    const auto p = raw_two_state(1, 1, 0.01, 100, 0);
    auto r = two_state_rates(0.5, p);
    CHECK(r.eta1 == Approx(1.5));
    CHECK(r.eta2 == Approx(1.5));

    r = two_state_rates(0.0, p);
    CHECK(r.eta1 == Approx(1.0));
    CHECK(r.eta2 == Approx(2.0));

    // tau(0.5) = 1 for any alpha
    r = two_state_rates(0.5, raw_two_state(1, 1, 0.01, 100, 1));
    CHECK(r.eta1 == Approx(1.5));
    CHECK(r.eta2 == Approx(1.5));
}

TEST_CASE("two-state rates keep sigma1 outside the tau factor") {
    const auto p = raw_two_state(0.3, 0.7, 0.02, 50, 2);
    const double x = 0.8;
    const double tau = std::pow(0.2 / 0.8, 2);
    const auto r = two_state_rates(x, p);
    CHECK(r.eta1 == Approx(0.3 + 50 * 0.02 * x / tau));
    CHECK(r.eta2 == Approx((0.7 + 50 * 0.02 * (1 - x)) / tau));
}

TEST_CASE("alpha = 0 matches Kirman formulas for random inputs") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double s1 = 0.01 + u(rng), s2 = 0.01 + u(rng), h = 0.001 + u(rng), x = u(rng);
        const auto p = raw_two_state(s1, s2, h, 200, 0);
        const auto r = two_state_rates(x, p);
        CHECK(r.eta1 == Approx(s1 + 200 * h * x).epsilon(1e-14));
        CHECK(r.eta2 == Approx(s2 + 200 * h * (1 - x)).epsilon(1e-14));
        CHECK(r.eta1 >= 0);
        CHECK(r.eta2 >= 0);
    }
}

TEST_CASE("two-state rates reject fractions outside [0, 1] and floor tau at x = 0") {
    const auto p = raw_two_state(1, 1, 0.01, 100, 2);
    CHECK_THROWS_AS(two_state_rates(-0.1, p), DomainError);
    CHECK_THROWS_AS(two_state_rates(1.1, p), DomainError);
    const auto r = two_state_rates(0.0, p);
    CHECK(std::isfinite(r.eta1));
    CHECK(std::isfinite(r.eta2));
}

TEST_CASE("two-state drift and diffusion") {
    TwoStateParams p;
    p.epsilon1 = p.epsilon2 = 1;
    p.alpha = 0;
    auto d = two_state_drift_diffusion(0.5, p);
    CHECK(d.drift == Approx(0.0));
    CHECK(d.diffusion == Approx(std::sqrt(0.5)));

    p.epsilon2 = 3;
    d = two_state_drift_diffusion(1.0, p);
    CHECK(d.drift == Approx(-3.0));
    CHECK(d.diffusion == 0.0);
    CHECK(two_state_drift_diffusion(0.0, p).diffusion == 0.0);

    p.epsilon2 = 1;
    p.alpha = 1;
    d = two_state_drift_diffusion(0.75, p);
    CHECK(d.drift == Approx(-2.0));
    CHECK(d.diffusion == Approx(std::sqrt(1.125)));
}

TEST_CASE("y transform") {
    CHECK(y_transform(0.5) == Approx(1.0));
    CHECK(y_transform(0.0) == 0.0);
    CHECK(y_inverse(3.0) == Approx(0.75));
    CHECK(std::isinf(y_transform(1.0)));
    CHECK_THROWS_AS(y_inverse(-1.0), DomainError);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> logy(std::log(1e-6), std::log(1e6));
    double prev_x = -1;
    for (int i = 0; i < 1000; ++i) {
        const double y = std::exp(logy(rng));
        // x = y / (1 + y) is rounded to a double, which costs eps * (1 + y) relative accuracy.
        const double tol = std::max(1e-12, 4 * std::numeric_limits<double>::epsilon() * (1 + y));
        CHECK(y_transform(y_inverse(y)) == Approx(y).epsilon(tol));
    }
    for (double y = 1e-6; y < 1e6; y *= 1.5) {
        const double x = y_inverse(y);
        CHECK(x > prev_x);
        prev_x = x;
    }
}

TEST_CASE("general class terms") {
    auto t = general_class_terms(1, 2, 4);
    CHECK(t.drift == Approx(0.0));
    CHECK(t.diffusion == Approx(1.0));
    t = general_class_terms(2, 2, 3);
    CHECK(t.drift == Approx(4.0));
    CHECK(t.diffusion == Approx(4.0));
    t = general_class_terms(1, 2.5, 5);
    CHECK(t.drift == Approx(0.0));
    CHECK(t.diffusion == Approx(1.0));
    CHECK_THROWS_AS(general_class_terms(0, 2, 4), DomainError);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.01, 100.0);
    for (int i = 0; i < 100; ++i) CHECK(general_class_terms(u(rng), 2, 4).drift == 0.0);
}

TEST_CASE("exponent prediction") {
    auto e = predict_exponents(1, 2);
    CHECK(e.eta == 2.0);
    CHECK(e.lambda == 4.0);
    CHECK(e.beta == 1.5);
    e = predict_exponents(0, 2);
    CHECK(e.eta == Approx(1.5));
    CHECK(e.lambda == Approx(3.0));
    CHECK(e.beta == Approx(1.0));
    e = predict_exponents(2, 2);
    CHECK(e.eta == Approx(2.5));
    CHECK(e.lambda == Approx(5.0));
    CHECK(e.beta == Approx(5.0 / 3.0));
    CHECK_THROWS_AS(predict_exponents(-1, 2), DomainError);
}

TEST_CASE("three-state tau") {
    CHECK(tau_three_state({1.0, 0.7}, 2) == 1.0);
    CHECK(tau_three_state({0.5, 1.0}, 2) == Approx(0.5));
    CHECK(tau_three_state({0.3, 0.0}, 2) == 1.0);
    CHECK(tau_three_state({0.3, 0.5}, 0) == 1.0);
    CHECK_THROWS_AS(tau_three_state({0.0, 0.5}, 2), DomainError);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> nf(1e-6, 1.0), xi(-1.0, 1.0), alpha(0.0, 4.0);
    for (int i = 0; i < 1000; ++i) {
        const double tau = tau_three_state({nf(rng), xi(rng)}, alpha(rng));
        CHECK(tau > 0.0);
        CHECK(tau <= 1.0);
    }
}

TEST_CASE("mood") {
    CHECK(*mood(0.25, 0.25) == 0.0);
    CHECK(*mood(0.3, 0.1) == Approx(0.5));
    CHECK(*mood(0.4, 0.0) == 1.0);
    CHECK_FALSE(mood(0.0, 0.0).has_value());
    CHECK(mood_or_zero(0.0, 0.0) == 0.0);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), b = u(rng);
        const double m = *mood(a, b);
        CHECK(m == -*mood(b, a));
        CHECK(m >= -1.0);
        CHECK(m <= 1.0);
    }
}

TEST_CASE("macro state accessors") {
    const MacroState s{0.2, 0.5};
    CHECK(s.n_o() + s.n_p() == Approx(0.8));
    CHECK(s.n_o() - s.n_p() == Approx(0.4));
    CHECK(*mood(s.n_o(), s.n_p()) == Approx(0.5));
}

TEST_CASE("three-state per-agent rates") {
    ThreeStateParams p;
    p.eps_cf = 0.5;
    p.eps_fc = 2;
    p.eps_cc = 3.5;
    p.big_h = 10;
    p.h1 = 0.01;
    const RawRates raw = RawRates::from(p);
    const double s_cf = 0.005, s_fc = 0.02, s_cc = 0.35;

    std::array<std::int64_t, 3> pop{100, 0, 0};
    auto eta = three_state_rates(pop, raw);
    CHECK(eta[0][1] == Approx(s_fc / 2));
    CHECK(eta[0][2] == Approx(s_fc / 2));

    pop = {0, 100, 0};
    eta = three_state_rates(pop, raw);
    CHECK(eta[1][0] == Approx(s_cf));
    CHECK(eta[1][2] == Approx(s_cc));

    // symmetric herding and the chartist speedup
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) CHECK(raw.herd[j][i] == raw.herd[i][j]);
    CHECK(raw.herd[1][2] == Approx(p.big_h * p.h1));

    RawRates bare;
    bare.herd = raw.herd;
    for (auto& row : bare.herd)
        for (auto& v : row) v /= p.h1;
    pop = {1, 1, 1};
    eta = three_state_rates(pop, bare);
    CHECK(eta[1][2] == Approx(10.0));
}

TEST_CASE("Fokker-Planck coefficients") {
    RawRates raw;
    const double s = 0.7;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            if (i != j) raw.sigma[j][i] = s;
    auto c = fokker_planck_coefficients(1.0 / 3, 1.0 / 3, raw);
    CHECK(c.drift[0] == Approx(0.0));
    CHECK(c.drift[1] == Approx(0.0));

    RawRates h;
    h.herd[0][1] = h.herd[1][0] = 1.0;
    c = fokker_planck_coefficients(0.25, 0.25, h);
    CHECK(c.diffusion[0][1] == Approx(-0.0625));

    c = fokker_planck_coefficients(1.0, 0.0, RawRates::from(ThreeStateParams{}));
    for (auto& row : c.diffusion)
        for (double v : row) CHECK(v == 0.0);

    CHECK_THROWS_AS(fokker_planck_coefficients(0.7, 0.7, raw), DomainError);
}

TEST_CASE("Fokker-Planck diffusion is symmetric positive semidefinite on the simplex") {
    const RawRates raw = RawRates::from(ThreeStateParams{0.3, 1.5, 2.0, 7.0, 2.0, 0.5});
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        double a = u(rng), b = u(rng);
        if (a + b > 1) {
            a = 1 - a;
            b = 1 - b;
        }
        const auto d = fokker_planck_coefficients(a, b, raw).diffusion;
        CHECK(d[0][1] == d[1][0]);
        const double tr = d[0][0] + d[1][1];
        const double det = d[0][0] * d[1][1] - d[0][1] * d[1][0];
        const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
        CHECK(tr / 2 - disc >= -1e-15);
    }
}

TEST_CASE("three-state drift and diffusion") {
    ThreeStateParams p;
    p.eps_cf = 0.5;
    p.eps_fc = 2;
    CHECK(p.fixed_point_nf() == Approx(0.2));
    auto t = three_state_drift_diffusion({0.2, 0.0}, p);
    CHECK(t.drift[0] == Approx(0.0).epsilon(1e-12));
    CHECK(t.drift[1] == 0.0);

    t = three_state_drift_diffusion({0.3, 1.0}, p);
    CHECK(t.diffusion[1] == 0.0);
    t = three_state_drift_diffusion({0.3, -1.0}, p);
    CHECK(t.diffusion[1] == 0.0);

    t = three_state_drift_diffusion({1.0, 0.4}, p);
    CHECK(t.diffusion[0] == 0.0);
    CHECK(t.drift[0] == Approx(-p.eps_fc));

    // tau scales every term except the eps_fc outflow
    p.alpha = 2;
    const MacroState s{0.5, 1.0};
    const double tau = tau_three_state(s, 2);
    t = three_state_drift_diffusion(s, p);
    CHECK(t.drift[0] == Approx(0.5 * p.eps_cf / tau - 0.5 * p.eps_fc));
    CHECK(t.diffusion[0] == Approx(std::sqrt(2 * 0.25 / tau)));
    CHECK(t.drift[1] == Approx(-2 * p.big_h * p.eps_cc / tau));
}

TEST_CASE("parameter validation") {
    TwoStateParams p;
    p.epsilon1 = -1;
    CHECK_THROWS_AS(p.validate(), DomainError);
    ThreeStateParams q;
    q.big_h = 0.5;
    CHECK_THROWS_AS(q.validate(), DomainError);
}
