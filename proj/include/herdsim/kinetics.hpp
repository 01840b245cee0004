#pragma once

// Rate, drift, diffusion and exponent formulas of the two- and three-group
// herding models. Everything here is a pure function of its arguments.

#include <array>
#include <cstdint>
#include <optional>
#include <span>

namespace herdsim {

inline constexpr double kDefaultDelta = 1e-6;
inline constexpr double kDefaultAlpha = 2.0;

/// Kirman-type two-state model in scaled units (rates divided by h).
struct TwoStateParams {
    double epsilon1 = 1.0;  ///< sigma1 / h
    double epsilon2 = 1.0;  ///< sigma2 / h
    double h = 1.0;         ///< herding intensity, 1/time
    std::int64_t n_agents = 100;
    double alpha = kDefaultAlpha;  ///< tau(y) = y^-alpha, y = x / (1 - x)

    double sigma1() const noexcept { return epsilon1 * h; }
    double sigma2() const noexcept { return epsilon2 * h; }

    /// Throws DomainError naming the first violated invariant.
    void validate() const;
};

/// Fundamentalist / pessimist / optimist model in scaled units (t_s = h1 t).
struct ThreeStateParams {
    double eps_cf = 0.1;  ///< sigma_cf / h1
    double eps_fc = 2.0;  ///< sigma_fc / h1
    double eps_cc = 3.5;  ///< sigma_cc / (H h1)
    double big_h = 10.0;  ///< chartist-chartist herding speedup H
    double alpha = kDefaultAlpha;
    double h1 = 1.0;  ///< base herding rate, 1/s; only used for physical time

    void validate() const;

    /// Zero-drift point of the n_f equation with tau = 1.
    double fixed_point_nf() const noexcept { return eps_cf / (eps_cf + eps_fc); }
};

/// Macroscopic three-state point: fundamentalist fraction and chartist mood.
struct MacroState {
    double n_f = 1.0;
    double xi = 0.0;

    double n_chartists() const noexcept { return 1.0 - n_f; }
    double n_o() const noexcept { return 0.5 * (1.0 - n_f) * (1.0 + xi); }
    double n_p() const noexcept { return 0.5 * (1.0 - n_f) * (1.0 - xi); }
};

struct ExponentPrediction {
    double eta;     ///< multiplicativity exponent of the general-class SDE
    double lambda;  ///< stationary PDF exponent, p(x) ~ x^-lambda
    double beta;    ///< PSD exponent, S(f) ~ f^-beta
};

struct RatePair {
    double eta1;  ///< per-agent rate 1 -> 2
    double eta2;  ///< per-agent rate 2 -> 1
};

struct DriftDiffusion {
    double drift;
    double diffusion;
};

// ---------------------------------------------------------------------------
// Two-state model

/// tau(x) = ((1 - x) / x)^alpha with x clamped to [delta, 1 - delta]; identically 1 for alpha = 0.
double two_state_tau(double x, double alpha, double delta = kDefaultDelta);

/// Per-agent transition rates with variable inter-event time. sigma1 stays outside
/// the 1/tau factor while sigma2 sits inside it; alpha = 0 gives the Kirman rates.
RatePair two_state_rates(double x, const TwoStateParams& p, double delta = kDefaultDelta);

/// Scaled-time drift eps1 (1 - x) - eps2 x / tau and diffusion sqrt(2 x (1 - x) / tau).
DriftDiffusion two_state_drift_diffusion(double x, const TwoStateParams& p,
                                         double delta = kDefaultDelta);

/// y = x / (1 - x); +infinity at x = 1.
double y_transform(double x);
double y_inverse(double y);

/// Drift (eta - lambda/2) x^(2 eta - 1) and diffusion x^eta of the general-class SDE.
DriftDiffusion general_class_terms(double x, double eta, double lambda);

/// eta = (3 + alpha) / 2, lambda = eps2 + alpha + 1, beta = 1 + (lambda - 3) / (2 (eta - 1)).
ExponentPrediction predict_exponents(double alpha, double eps2);

// ---------------------------------------------------------------------------
// Three-state model

/// tau = [1 + |(1 - n_f) / n_f * xi|^alpha]^-1, with alpha = 0 meaning tau = 1.
double tau_three_state(const MacroState& state, double alpha);

/// (n_o - n_p) / (n_o + n_p); empty when there are no chartists.
std::optional<double> mood(double n_o, double n_p);

/// mood() with the no-chartist case mapped to 0.
inline double mood_or_zero(double n_o, double n_p) { return mood(n_o, n_p).value_or(0.0); }

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Unscaled per-agent idiosyncratic rates sigma[j][i] and herding intensities
/// herd[j][i] for j -> i. State indices: 0 fundamentalist, 1 pessimist, 2 optimist.
struct RawRates {
    Matrix3 sigma{};
    Matrix3 herd{};

    /// sigma_cf = eps_cf h1, sigma_fc = eps_fc h1, sigma_cc = eps_cc H h1 with the
    /// optimist/pessimist symmetry and h_23 = H h1.
    static RawRates from(const ThreeStateParams& p);
};

/// eta_ji = sigma_ji + N herd_ji x_i for the given occupation counts.
Matrix3 three_state_rates(std::span<const std::int64_t, 3> counts, const RawRates& raw);

struct FokkerPlanckCoefficients {
    std::array<double, 2> drift;                   ///< D^1_i
    std::array<std::array<double, 2>, 2> diffusion;  ///< D^2_ij, symmetric
};

/// Drift and diffusion of the two-variable Fokker-Planck equation at (x1, x2).
FokkerPlanckCoefficients fokker_planck_coefficients(double x1, double x2, const RawRates& raw);

struct ThreeStateTerms {
    std::array<double, 2> drift;      ///< (n_f, xi)
    std::array<double, 2> diffusion;  ///< independent noise amplitudes
};

/// Scaled-time drift and diagonal diffusion of the (n_f, xi) system with the tau clock.
ThreeStateTerms three_state_drift_diffusion(const MacroState& state, const ThreeStateParams& p,
                                            double delta = kDefaultDelta);

}  // namespace herdsim
