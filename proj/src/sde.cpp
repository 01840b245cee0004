#include "herdsim/sde.hpp"

#include "herdsim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace herdsim {

State SdeSystem::clamp(State s) const {
    for (std::size_t i = 0; i < dimension; ++i) s[i] = std::clamp(s[i], lower[i], upper[i]);
    return s;
}

void IntegratorConfig::validate() const {
    if (!(kappa > 0.0 && kappa <= 1.0)) throw DomainError("kappa must lie in (0, 1]");
    if (!(max_dt > 0.0)) throw DomainError("max_dt must be positive");
    if (!(t_end > 0.0)) throw DomainError("t_end must be positive");
    if (!(sample_dt > 0.0)) throw DomainError("sample_dt must be positive");
}

double reflect(double value, double lo, double hi) {
    for (int k = 0; k < 4 && (value < lo || value > hi); ++k) {
        if (value < lo) value = 2.0 * lo - value;
        if (value > hi) value = 2.0 * hi - value;
    }
    return std::clamp(value, lo, hi);
}

namespace {

void check_finite(const Coefficients& c, std::size_t dim, double t) {
    for (std::size_t i = 0; i < dim; ++i) {
        if (!std::isfinite(c.drift[i]) || !std::isfinite(c.diffusion[i]))
            throw NumericFailure("non-finite drift or diffusion", t);
    }
}

State advance(const State& s, const SdeSystem& sys, const Coefficients& c, double dt,
              const State& dw, double t) {
    State out = s;
    for (std::size_t i = 0; i < sys.dimension; ++i) {
        const double v = s[i] + c.drift[i] * dt + c.diffusion[i] * dw[i];
        if (!std::isfinite(v)) throw NumericFailure("non-finite state", t);
        out[i] = reflect(v, sys.lower[i], sys.upper[i]);
    }
    return out;
}

double step_for(const State& s, const SdeSystem& sys, const Coefficients& c,
                const IntegratorConfig& cfg) {
    State width{};
    if (sys.step_scale) {
        width = sys.step_scale(s);
    } else {
        for (std::size_t i = 0; i < sys.dimension; ++i)
            width[i] = std::min(s[i] - sys.lower[i], sys.upper[i] - s[i]) + sys.delta;
    }
    double rate = 0.0;
    for (std::size_t i = 0; i < sys.dimension; ++i) {
        const double w = width[i];
        rate = std::max({rate, std::abs(c.drift[i]) / w, c.diffusion[i] * c.diffusion[i] / (w * w)});
    }
    if (!(rate > 0.0)) return cfg.max_dt;
    return std::min(cfg.max_dt, cfg.kappa * cfg.kappa / rate);
}

}  // namespace

State em_step(const State& state, const SdeSystem& system, double dt, const State& increments,
              double t) {
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    const Coefficients c = system.coefficients(state);
    check_finite(c, system.dimension, t);
    return advance(state, system, c, dt, increments, t);
}

double adaptive_dt(const State& state, const SdeSystem& system, const IntegratorConfig& cfg) {
    return step_for(state, system, system.coefficients(state), cfg);
}

State WienerIncrements::draw(double dt, std::size_t dimension) {
    const double scale = std::sqrt(dt);
    State dw{};
    for (std::size_t i = 0; i < dimension; ++i) dw[i] = scale * normal_(rng_);
    return dw;
}

TimeSeries integrate(const SdeSystem& system, const IntegratorConfig& cfg) {
    cfg.validate();
    WienerIncrements noise(make_stream(cfg.seed, cfg.stream));

    const auto n_samples =
        static_cast<std::size_t>(std::floor(cfg.t_end / cfg.sample_dt + 1e-9)) + 1;
    TimeSeries out(system.names);
    out.reserve(n_samples);

    auto record = [&](double t, const State& s) {
        out.t.push_back(t);
        for (std::size_t i = 0; i < system.dimension; ++i) out.columns[i].push_back(s[i]);
    };

    State s = system.clamp(cfg.initial);
    double t = 0.0;
    record(t, s);
    for (std::size_t k = 1; k < n_samples; ++k) {
        const double t_sample = static_cast<double>(k) * cfg.sample_dt;
        while (t < t_sample) {
            const Coefficients c = system.coefficients(s);
            check_finite(c, system.dimension, t);
            double dt = step_for(s, system, c, cfg);
            const bool last = t + dt >= t_sample;
            if (last) dt = t_sample - t;
            s = advance(s, system, c, dt, noise.draw(dt, system.dimension), t);
            t = last ? t_sample : t + dt;
        }
        record(t, s);
    }
    return out;
}

SdeSystem two_state_system(const TwoStateParams& p, double delta) {
    p.validate();
    SdeSystem sys;
    sys.dimension = 1;
    sys.names = {"x"};
    sys.lower = {delta, 0.0};
    sys.upper = {1.0 - delta, 0.0};
    sys.delta = delta;
    sys.coefficients = [p, delta](const State& s) {
        const DriftDiffusion dd = two_state_drift_diffusion(s[0], p, delta);
        return Coefficients{{dd.drift, 0.0}, {dd.diffusion, 0.0}};
    };
    return sys;
}

SdeSystem transformed_two_state_system(const TwoStateParams& p, double y_min, double y_max) {
    p.validate();
    if (!(y_min > 0.0 && y_max > y_min)) throw DomainError("need 0 < y_min < y_max");
    SdeSystem sys;
    sys.dimension = 1;
    sys.names = {"y"};
    sys.lower = {y_min, 0.0};
    sys.upper = {y_max, 0.0};
    sys.coefficients = [p](const State& s) {
        const double y = s[0];
        const double inv_tau = p.alpha == 0.0 ? 1.0 : std::pow(y, p.alpha);
        const double drift = (p.epsilon1 + y * (2.0 - p.epsilon2) * inv_tau) * (1.0 + y);
        const double diffusion = std::sqrt(2.0 * y * inv_tau) * (1.0 + y);
        return Coefficients{{drift, 0.0}, {diffusion, 0.0}};
    };
    sys.step_scale = [](const State& s) { return State{s[0], 0.0}; };
    return sys;
}

SdeSystem general_class_system(double eta, double lambda, double x_min, double x_max) {
    if (!(x_min > 0.0 && x_max > x_min)) throw DomainError("need 0 < x_min < x_max");
    SdeSystem sys;
    sys.dimension = 1;
    sys.names = {"x"};
    sys.lower = {x_min, 0.0};
    sys.upper = {x_max, 0.0};
    sys.coefficients = [eta, lambda](const State& s) {
        const DriftDiffusion dd = general_class_terms(s[0], eta, lambda);
        return Coefficients{{dd.drift, 0.0}, {dd.diffusion, 0.0}};
    };
    sys.step_scale = [](const State& s) { return State{s[0], 0.0}; };
    return sys;
}

SdeSystem three_state_system(const ThreeStateParams& p, double delta) {
    p.validate();
    SdeSystem sys;
    sys.dimension = 2;
    sys.names = {"n_f", "xi"};
    sys.lower = {delta, -1.0 + delta};
    sys.upper = {1.0 - delta, 1.0 - delta};
    sys.delta = delta;
    sys.coefficients = [p, delta](const State& s) {
        const ThreeStateTerms tt = three_state_drift_diffusion({s[0], s[1]}, p, delta);
        return Coefficients{tt.drift, tt.diffusion};
    };
    return sys;
}

}  // namespace herdsim
