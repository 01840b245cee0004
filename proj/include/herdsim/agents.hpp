#pragma once

// Exact event-driven simulation of the two- and three-state herding jump processes.
// Time is measured in scaled units (h t for two states, h1 t for three states).

#include "herdsim/kinetics.hpp"
#include "herdsim/rng.hpp"
#include "herdsim/timeseries.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

namespace herdsim {

/// Integer occupation numbers. Two-state order: (state 1, state 2), so x = counts[1] / N.
/// Three-state order: (fundamentalists, pessimists, optimists).
struct AgentPopulation {
    std::vector<std::int64_t> counts;
    std::int64_t n_total = 0;

    AgentPopulation() = default;
    explicit AgentPopulation(std::vector<std::int64_t> c);

    /// Throws DomainError unless counts are nonnegative and sum to n_total.
    void validate() const;
    double fraction(std::size_t state) const {
        return static_cast<double>(counts[state]) / static_cast<double>(n_total);
    }

    static AgentPopulation two_state(std::int64_t n, std::int64_t in_state2);
    static AgentPopulation three_state(std::int64_t fundamentalists, std::int64_t pessimists,
                                       std::int64_t optimists);
};

struct TwoStateModel {
    TwoStateParams params;
    double delta = kDefaultDelta;
};

/// Three-state jump process with the rates of three_state_rates (no tau clock).
struct ThreeStateModel {
    ThreeStateParams params;
    RawRates raw;

    explicit ThreeStateModel(const ThreeStateParams& p) : params(p), raw(RawRates::from(p)) {}
    ThreeStateModel(const ThreeStateParams& p, const RawRates& r) : params(p), raw(r) {}
};

using AgentModel = std::variant<TwoStateModel, ThreeStateModel>;

struct Transition {
    std::uint8_t from = 0;
    std::uint8_t to = 0;
    double rate = 0.0;  ///< aggregate rate X_from * eta_{from,to}, per unit scaled time
};

struct TransitionTable {
    std::array<Transition, 6> items{};
    std::size_t size = 0;
    double total = 0.0;

    std::span<const Transition> transitions() const { return {items.data(), size}; }
};

TransitionTable total_transition_rates(const AgentPopulation& pop, const TwoStateModel& model);
TransitionTable total_transition_rates(const AgentPopulation& pop, const ThreeStateModel& model);

struct Event {
    std::size_t index;  ///< position in the transition table
    double wait;        ///< exponential waiting time
};

/// Draws the next transition with probability proportional to its rate.
/// Throws AbsorbingState when every rate is zero.
Event next_event(const TransitionTable& table, Engine& rng);

/// Stateful jump process; owns its population and random stream.
class JumpProcess {
public:
    JumpProcess(AgentModel model, AgentPopulation initial, Engine rng);

    /// Performs one event; returns false if the state is absorbing.
    bool step();

    double time() const noexcept { return time_; }
    std::uint64_t events() const noexcept { return events_; }
    const AgentPopulation& population() const noexcept { return pop_; }
    const TransitionTable& rates() const noexcept { return table_; }

    /// Runs until `t_end`, recording the population at grid times k * sample_dt.
    TimeSeries sample(double t_end, double sample_dt);

private:
    void refresh_rates();

    AgentModel model_;
    AgentPopulation pop_;
    Engine rng_;
    TransitionTable table_;
    double time_ = 0.0;
    std::uint64_t events_ = 0;
};

struct TrajectoryConfig {
    double t_end = 1.0;
    double sample_dt = 0.01;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;  ///< trajectory index within a sweep
    AgentPopulation initial;

    void validate() const;
};

/// Two-state output has column "x"; three-state output has "n_f" and "xi".
TimeSeries simulate_population(const TrajectoryConfig& cfg, const AgentModel& model);

}  // namespace herdsim
