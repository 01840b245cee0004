#pragma once

// Financial observables of the three-group model: relative log-price, endogenous
// returns, and the double-stochastic return with heavy-tailed exogenous noise.

#include "herdsim/kinetics.hpp"
#include "herdsim/rng.hpp"
#include "herdsim/timeseries.hpp"

namespace herdsim {

enum class ExogenousNoise { q_gaussian, gaussian };

struct MarketParams {
    double r0_bar = 1.0;    ///< chartist impact factor
    double a = 1.0;         ///< endogenous coupling in r0 = b + a |x|
    double b = 0.1;         ///< exogenous noise floor
    double lambda_q = 5.0;  ///< power-law exponent of the q-Gaussian density
    double window_T = 0.01; ///< return and averaging window, scaled time
    double mu = 0.0;        ///< GBM drift per unit time
    double sigma = 0.0;     ///< GBM volatility per sqrt(unit time)
    ExogenousNoise noise = ExogenousNoise::q_gaussian;

    void validate() const;
};

/// p = r0_bar (n_o - n_p) / n_f = r0_bar xi (1 - n_f) / n_f; requires n_f >= delta.
double log_price(const MacroState& state, double r0_bar, double delta = kDefaultDelta);

inline double endogenous_return(double p_now, double p_lagged) { return p_now - p_lagged; }

/// Normal draw with mean (mu - sigma^2 / 2) T and variance sigma^2 T.
double gaussian_return(const MarketParams& mkt, double T, Engine& rng);

/// r0 = b + a |x|.
double r0_scale(double x, double a, double b);

/// Symmetric draw with density proportional to [1 + r^2 / ((lambda - 1) scale^2)]^(-lambda / 2),
/// i.e. scale times a Student t variate with lambda - 1 degrees of freedom.
double q_gaussian_sample(double scale, double lambda_q, Engine& rng);

/// Normalized density of q_gaussian_sample.
double q_gaussian_density(double r, double scale, double lambda_q);

/// Trailing arithmetic mean over the round(window_T / dt) samples ending at each grid
/// time, applied to every column. Output starts at the first time >= t_0 + window_T.
TimeSeries moving_average(const TimeSeries& series, double window_T);

/// Column "p" from a three-state series with columns "n_f" and "xi".
TimeSeries log_price_series(const TimeSeries& states, double r0_bar,
                            double delta = kDefaultDelta);

/// Returns at non-overlapping window ends t_0 + k T (k >= 1): exogenous noise with scale
/// r0(|MA(p, T)|) sqrt(T). Needs a column "p" covering at least 2 T. Output columns t, r.
TimeSeries synthesize_returns(const TimeSeries& prices, const MarketParams& mkt, Engine& rng);

}  // namespace herdsim
