#pragma once

// Euler-Maruyama integration of the macroscopic herding SDEs with boundary-aware
// adaptive steps and reflecting boundaries.

#include "herdsim/kinetics.hpp"
#include "herdsim/rng.hpp"
#include "herdsim/timeseries.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace herdsim {

/// Up to two state components; unused components stay zero.
using State = std::array<double, 2>;

struct Coefficients {
    State drift{};
    State diffusion{};  ///< per-component amplitude of an independent Wiener channel
};

/// Diagonal-noise SDE dX_i = a_i(X) dt + b_i(X) dW_i on a box [lower, upper].
struct SdeSystem {
    std::size_t dimension = 1;
    std::vector<std::string> names;
    std::function<Coefficients(const State&)> coefficients;
    State lower{};
    State upper{};
    /// Local length scale for step control. When empty, the distance to the nearest
    /// bound plus delta is used.
    std::function<State(const State&)> step_scale;
    double delta = kDefaultDelta;

    State clamp(State s) const;
};

struct IntegratorConfig {
    double kappa = 0.1;  ///< step-control constant, 0 < kappa <= 1
    double max_dt = 0.01;
    double t_end = 1.0;
    double sample_dt = 0.01;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    State initial{};

    void validate() const;
};

/// Mirrors `value` back into [lo, hi]; falls back to clamping for overshoots wider than the box.
double reflect(double value, double lo, double hi);

/// One Euler-Maruyama step given Wiener increments already scaled by sqrt(dt),
/// followed by reflection into the domain. Throws NumericFailure on non-finite values.
State em_step(const State& state, const SdeSystem& system, double dt, const State& increments,
              double t = 0.0);

/// min(max_dt, kappa^2 / R) with R the largest |drift| / w or diffusion^2 / w^2 over components.
double adaptive_dt(const State& state, const SdeSystem& system, const IntegratorConfig& cfg);

/// Source of independent standard Wiener increments, one channel per component.
class WienerIncrements {
public:
    explicit WienerIncrements(Engine rng) : rng_(std::move(rng)) {}
    State draw(double dt, std::size_t dimension);

private:
    Engine rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Integrates from cfg.initial to cfg.t_end, sampling at multiples of cfg.sample_dt.
/// Step sizes are cut so every grid time is hit exactly.
TimeSeries integrate(const SdeSystem& system, const IntegratorConfig& cfg);

// ---------------------------------------------------------------------------
// Systems of the herding models

/// x-equation of the two-state model on [delta, 1 - delta].
SdeSystem two_state_system(const TwoStateParams& p, double delta = kDefaultDelta);

/// y = x / (1 - x) form of the two-state model with tau(y) = y^-alpha, reflecting in [y_min, y_max].
SdeSystem transformed_two_state_system(const TwoStateParams& p, double y_min, double y_max);

/// General-class SDE reflecting in [x_min, x_max] with multiplicative step scale x.
SdeSystem general_class_system(double eta, double lambda, double x_min, double x_max);

/// (n_f, xi) system with n_f in [delta, 1 - delta] and xi in [-1 + delta, 1 - delta].
SdeSystem three_state_system(const ThreeStateParams& p, double delta = kDefaultDelta);

}  // namespace herdsim
