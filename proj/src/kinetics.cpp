#include "herdsim/kinetics.hpp"

#include "herdsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace herdsim {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

void require_fraction(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

double clamp_fraction(double x, double delta) { return std::clamp(x, delta, 1.0 - delta); }

}  // namespace

void TwoStateParams::validate() const {
    require(epsilon1 > 0.0, "epsilon1 must be positive");
    require(epsilon2 > 0.0, "epsilon2 must be positive");
    require(h > 0.0, "h must be positive");
    require(n_agents >= 2, "n_agents must be at least 2");
    require(alpha >= 0.0, "alpha must be nonnegative");
}

void ThreeStateParams::validate() const {
    require(eps_cf > 0.0, "eps_cf must be positive");
    require(eps_fc > 0.0, "eps_fc must be positive");
    require(eps_cc > 0.0, "eps_cc must be positive");
    require(big_h >= 1.0, "H must be at least 1");
    require(alpha >= 0.0, "alpha must be nonnegative");
    require(h1 > 0.0, "h1 must be positive");
}

double two_state_tau(double x, double alpha, double delta) {
    require_fraction(x, "x");
    if (alpha == 0.0) return 1.0;
    const double xc = clamp_fraction(x, delta);
    return std::pow((1.0 - xc) / xc, alpha);
}

RatePair two_state_rates(double x, const TwoStateParams& p, double delta) {
    const double tau = two_state_tau(x, p.alpha, delta);
    const double nh = static_cast<double>(p.n_agents) * p.h;
    return {p.sigma1() + nh * x / tau, (p.sigma2() + nh * (1.0 - x)) / tau};
}

DriftDiffusion two_state_drift_diffusion(double x, const TwoStateParams& p, double delta) {
    const double tau = two_state_tau(x, p.alpha, delta);
    return {p.epsilon1 * (1.0 - x) - p.epsilon2 * x / tau,
            std::sqrt(2.0 * x * (1.0 - x) / tau)};
}

double y_transform(double x) {
    require_fraction(x, "x");
    if (x == 1.0) return std::numeric_limits<double>::infinity();
    return x / (1.0 - x);
}

double y_inverse(double y) {
    require(y >= 0.0, "y must be nonnegative");
    if (std::isinf(y)) return 1.0;
    return y / (1.0 + y);
}

DriftDiffusion general_class_terms(double x, double eta, double lambda) {
    require(x > 0.0, "general-class variable must be positive");
    return {(eta - 0.5 * lambda) * std::pow(x, 2.0 * eta - 1.0), std::pow(x, eta)};
}

ExponentPrediction predict_exponents(double alpha, double eps2) {
    require(alpha >= 0.0, "alpha must be nonnegative");
    const double eta = 0.5 * (3.0 + alpha);
    const double lambda = eps2 + alpha + 1.0;
    return {eta, lambda, 1.0 + (lambda - 3.0) / (2.0 * (eta - 1.0))};
}

double tau_three_state(const MacroState& state, double alpha) {
    require(state.n_f > 0.0 && state.n_f <= 1.0, "n_f must lie in (0, 1]");
    require(state.xi >= -1.0 && state.xi <= 1.0, "xi must lie in [-1, 1]");
    if (alpha == 0.0) return 1.0;
    const double z = std::abs((1.0 - state.n_f) / state.n_f * state.xi);
    return 1.0 / (1.0 + std::pow(z, alpha));
}

std::optional<double> mood(double n_o, double n_p) {
    require(n_o >= 0.0 && n_p >= 0.0, "chartist fractions must be nonnegative");
    const double total = n_o + n_p;
    if (total == 0.0) return std::nullopt;
    return (n_o - n_p) / total;
}

RawRates RawRates::from(const ThreeStateParams& p) {
    const double s_cf = p.eps_cf * p.h1;
    const double s_fc = p.eps_fc * p.h1;
    const double s_cc = p.eps_cc * p.big_h * p.h1;
    RawRates r;
    r.sigma[0][1] = r.sigma[0][2] = 0.5 * s_fc;
    r.sigma[1][0] = r.sigma[2][0] = s_cf;
    r.sigma[1][2] = r.sigma[2][1] = s_cc;
    r.herd[0][1] = r.herd[1][0] = p.h1;
    r.herd[0][2] = r.herd[2][0] = p.h1;
    r.herd[1][2] = r.herd[2][1] = p.big_h * p.h1;
    return r;
}

Matrix3 three_state_rates(std::span<const std::int64_t, 3> counts, const RawRates& raw) {
    std::int64_t n = 0;
    for (auto c : counts) {
        require(c >= 0, "occupation counts must be nonnegative");
        n += c;
    }
    require(n > 0, "population must be nonempty");
    const double nd = static_cast<double>(n);
    Matrix3 eta{};
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t i = 0; i < 3; ++i) {
            if (i == j) continue;
            eta[j][i] = raw.sigma[j][i] + nd * raw.herd[j][i] * (static_cast<double>(counts[i]) / nd);
        }
    }
    return eta;
}

FokkerPlanckCoefficients fokker_planck_coefficients(double x1, double x2, const RawRates& raw) {
    constexpr double tol = 1e-12;
    require(x1 >= 0.0 && x2 >= 0.0 && x1 + x2 <= 1.0 + tol, "point lies outside the simplex");
    const double x3 = std::max(0.0, 1.0 - x1 - x2);
    const auto& s = raw.sigma;
    const auto& h = raw.herd;

    FokkerPlanckCoefficients c{};
    c.drift[0] = s[1][0] * x2 + s[2][0] * x3 - (s[0][1] + s[0][2]) * x1;
    c.drift[1] = s[0][1] * x1 + s[2][1] * x3 - (s[1][0] + s[1][2]) * x2;
    const double h12 = h[0][1] * x1 * x2;
    c.diffusion[0][0] = h12 + h[0][2] * x1 * x3;
    c.diffusion[1][1] = h12 + h[1][2] * x2 * x3;
    c.diffusion[0][1] = c.diffusion[1][0] = -h12;
    return c;
}

ThreeStateTerms three_state_drift_diffusion(const MacroState& state, const ThreeStateParams& p,
                                            double delta) {
    require_fraction(state.n_f, "n_f");
    require(state.xi >= -1.0 && state.xi <= 1.0, "xi must lie in [-1, 1]");
    const double tau = tau_three_state({clamp_fraction(state.n_f, delta), state.xi}, p.alpha);
    const double nf = state.n_f;
    const double xi = state.xi;

    ThreeStateTerms out{};
    out.drift[0] = (1.0 - nf) * p.eps_cf / tau - nf * p.eps_fc;
    out.drift[1] = -2.0 * p.big_h * p.eps_cc * xi / tau;
    out.diffusion[0] = std::sqrt(2.0 * nf * (1.0 - nf) / tau);
    out.diffusion[1] = std::sqrt(std::max(0.0, 2.0 * p.big_h * (1.0 - xi * xi) / tau));
    return out;
}

}  // namespace herdsim
