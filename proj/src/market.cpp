#include "herdsim/market.hpp"

#include "herdsim/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace herdsim {

void MarketParams::validate() const {
    if (!(r0_bar > 0.0)) throw DomainError("r0_bar must be positive");
    if (!(a >= 0.0)) throw DomainError("a must be nonnegative");
    if (!(b >= 0.0)) throw DomainError("b must be nonnegative");
    if (!(lambda_q > 3.0)) throw DomainError("lambda must exceed 3");
    if (!(window_T > 0.0)) throw DomainError("window_T must be positive");
    if (!(sigma >= 0.0)) throw DomainError("sigma must be nonnegative");
}

double log_price(const MacroState& state, double r0_bar, double delta) {
    if (!(state.n_f >= delta && state.n_f <= 1.0))
        throw DomainError("n_f below the floor in log_price");
    return r0_bar * state.xi * (1.0 - state.n_f) / state.n_f;
}

double gaussian_return(const MarketParams& mkt, double T, Engine& rng) {
    if (!(T > 0.0)) throw DomainError("return window must be positive");
    const double mean = (mkt.mu - 0.5 * mkt.sigma * mkt.sigma) * T;
    if (mkt.sigma == 0.0) return mean;
    return std::normal_distribution<double>(mean, mkt.sigma * std::sqrt(T))(rng);
}

double r0_scale(double x, double a, double b) {
    if (!(a >= 0.0 && b >= 0.0)) throw DomainError("a and b must be nonnegative");
    return b + a * std::abs(x);
}

double q_gaussian_sample(double scale, double lambda_q, Engine& rng) {
    if (!(lambda_q > 3.0)) throw DomainError("q-Gaussian exponent must exceed 3");
    if (!(scale >= 0.0)) throw DomainError("q-Gaussian scale must be nonnegative");
    if (scale == 0.0) return 0.0;
    const double dof = lambda_q - 1.0;
    const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
    const double chi2 = std::chi_squared_distribution<double>(dof)(rng);
    return scale * z / std::sqrt(chi2 / dof);
}

double q_gaussian_density(double r, double scale, double lambda_q) {
    if (!(lambda_q > 3.0) || !(scale > 0.0)) throw DomainError("invalid q-Gaussian parameters");
    const double dof = lambda_q - 1.0;
    const double log_norm = std::lgamma(0.5 * lambda_q) - std::lgamma(0.5 * dof) -
                            0.5 * std::log(dof * std::numbers::pi) - std::log(scale);
    const double u = r / scale;
    return std::exp(log_norm - 0.5 * lambda_q * std::log1p(u * u / dof));
}

namespace {

std::size_t window_samples(const TimeSeries& series, double window_T) {
    const double dt = series.dt();
    if (!(dt > 0.0)) throw InsufficientData("series needs at least two samples");
    if (window_T < dt * (1.0 - 1e-9)) throw ConfigError("market.window_T", "window shorter than one sample");
    return static_cast<std::size_t>(std::llround(window_T / dt));
}

}  // namespace

TimeSeries moving_average(const TimeSeries& series, double window_T) {
    const std::size_t m = window_samples(series, window_T);
    TimeSeries out(series.names);
    if (series.size() <= m) return out;
    out.reserve(series.size() - m);
    for (std::size_t i = m; i < series.size(); ++i) out.t.push_back(series.t[i]);
    for (std::size_t c = 0; c < series.columns.size(); ++c) {
        const auto& col = series.columns[c];
        // Running sum with periodic recomputation to bound rounding drift.
        double sum = 0.0;
        for (std::size_t j = 1; j <= m; ++j) sum += col[j];
        for (std::size_t i = m; i < series.size(); ++i) {
            if (i > m) sum += col[i] - col[i - m];
            if ((i - m) % 4096 == 4095) {
                sum = 0.0;
                for (std::size_t j = i + 1 - m; j <= i; ++j) sum += col[j];
            }
            out.columns[c].push_back(sum / static_cast<double>(m));
        }
    }
    return out;
}

TimeSeries log_price_series(const TimeSeries& states, double r0_bar, double delta) {
    const auto nf = states.column("n_f");
    const auto xi = states.column("xi");
    TimeSeries out({"p"});
    out.t = states.t;
    out.columns[0].resize(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        out.columns[0][i] = log_price({std::max(nf[i], delta), xi[i]}, r0_bar, delta);
    return out;
}

TimeSeries synthesize_returns(const TimeSeries& prices, const MarketParams& mkt, Engine& rng) {
    mkt.validate();
    const std::size_t m = window_samples(prices, mkt.window_T);
    if (prices.size() < 2 * m + 1) throw InsufficientData("price series shorter than two windows");
    const auto p = prices.column("p");
    const double sqrt_t = std::sqrt(mkt.window_T);

    TimeSeries out({"r"});
    out.reserve(prices.size() / m);
    for (std::size_t end = m; end < prices.size(); end += m) {
        double sum = 0.0;
        for (std::size_t j = end + 1 - m; j <= end; ++j) sum += p[j];
        const double scale = r0_scale(sum / static_cast<double>(m), mkt.a, mkt.b);
        double r = 0.0;
        if (mkt.noise == ExogenousNoise::q_gaussian) {
            r = q_gaussian_sample(scale * sqrt_t, mkt.lambda_q, rng);
        } else {
            MarketParams local = mkt;
            local.sigma = scale;
            r = gaussian_return(local, mkt.window_T, rng);
        }
        out.t.push_back(prices.t[end]);
        out.columns[0].push_back(r);
    }
    return out;
}

}  // namespace herdsim
