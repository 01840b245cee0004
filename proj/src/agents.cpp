#include "herdsim/agents.hpp"

#include "herdsim/errors.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace herdsim {

AgentPopulation::AgentPopulation(std::vector<std::int64_t> c)
    : counts(std::move(c)), n_total(std::accumulate(counts.begin(), counts.end(), std::int64_t{0})) {}

void AgentPopulation::validate() const {
    if (counts.size() != 2 && counts.size() != 3)
        throw DomainError("population must have two or three states");
    std::int64_t sum = 0;
    for (auto c : counts) {
        if (c < 0) throw DomainError("occupation counts must be nonnegative");
        sum += c;
    }
    if (sum != n_total) throw DomainError("occupation counts must sum to n_total");
    if (n_total <= 0) throw DomainError("population must be nonempty");
}

AgentPopulation AgentPopulation::two_state(std::int64_t n, std::int64_t in_state2) {
    AgentPopulation p({n - in_state2, in_state2});
    p.validate();
    return p;
}

AgentPopulation AgentPopulation::three_state(std::int64_t fundamentalists, std::int64_t pessimists,
                                             std::int64_t optimists) {
    AgentPopulation p({fundamentalists, pessimists, optimists});
    p.validate();
    return p;
}

TransitionTable total_transition_rates(const AgentPopulation& pop, const TwoStateModel& model) {
    const double x = pop.fraction(1);
    const double n1 = static_cast<double>(pop.counts[0]);
    const double n2 = static_cast<double>(pop.counts[1]);
    // Per-agent rates are per unit physical time; dividing by h gives scaled time.
    const RatePair r = two_state_rates(x, model.params, model.delta);
    const double inv_h = 1.0 / model.params.h;

    TransitionTable t;
    t.size = 2;
    t.items[0] = {0, 1, n1 > 0 ? n1 * r.eta1 * inv_h : 0.0};
    t.items[1] = {1, 0, n2 > 0 ? n2 * r.eta2 * inv_h : 0.0};
    t.total = t.items[0].rate + t.items[1].rate;
    return t;
}

TransitionTable total_transition_rates(const AgentPopulation& pop, const ThreeStateModel& model) {
    const auto counts = std::span<const std::int64_t, 3>(pop.counts.data(), 3);
    const Matrix3 eta = three_state_rates(counts, model.raw);
    const double inv_h1 = 1.0 / model.params.h1;

    TransitionTable t;
    for (std::uint8_t j = 0; j < 3; ++j) {
        const double xj = static_cast<double>(counts[j]);
        for (std::uint8_t i = 0; i < 3; ++i) {
            if (i == j) continue;
            const double rate = xj > 0 ? xj * eta[j][i] * inv_h1 : 0.0;
            t.items[t.size++] = {j, i, rate};
            t.total += rate;
        }
    }
    return t;
}

Event next_event(const TransitionTable& table, Engine& rng) {
    if (!(table.total > 0.0)) throw AbsorbingState("all transition rates are zero");
    const double wait = std::exponential_distribution<double>(table.total)(rng);
    const double target = std::uniform_real_distribution<double>(0.0, table.total)(rng);
    double acc = 0.0;
    std::size_t last_active = 0;
    for (std::size_t k = 0; k < table.size; ++k) {
        if (table.items[k].rate <= 0.0) continue;
        acc += table.items[k].rate;
        last_active = k;
        if (target < acc) return {k, wait};
    }
    // Rounding can leave target marginally above the accumulated sum.
    return {last_active, wait};
}

JumpProcess::JumpProcess(AgentModel model, AgentPopulation initial, Engine rng)
    : model_(std::move(model)), pop_(std::move(initial)), rng_(std::move(rng)) {
    pop_.validate();
    const std::size_t states = std::holds_alternative<TwoStateModel>(model_) ? 2 : 3;
    if (pop_.counts.size() != states) throw DomainError("population does not match the model");
    std::visit([](const auto& m) { m.params.validate(); }, model_);
    refresh_rates();
}

void JumpProcess::refresh_rates() {
    table_ = std::visit([this](const auto& m) { return total_transition_rates(pop_, m); }, model_);
}

bool JumpProcess::step() {
    if (!(table_.total > 0.0)) return false;
    const Event ev = next_event(table_, rng_);
    const Transition& tr = table_.items[ev.index];
    --pop_.counts[tr.from];
    ++pop_.counts[tr.to];
    time_ += ev.wait;
    ++events_;
    refresh_rates();
    return true;
}

namespace {

void record(TimeSeries& out, double t, const AgentPopulation& pop) {
    out.t.push_back(t);
    if (pop.counts.size() == 2) {
        out.columns[0].push_back(pop.fraction(1));
    } else {
        out.columns[0].push_back(pop.fraction(0));
        out.columns[1].push_back(mood_or_zero(pop.fraction(2), pop.fraction(1)));
    }
}

}  // namespace

TimeSeries JumpProcess::sample(double t_end, double sample_dt) {
    TimeSeries out(pop_.counts.size() == 2 ? std::vector<std::string>{"x"}
                                           : std::vector<std::string>{"n_f", "xi"});
    const double t0 = time_;
    const auto n_samples = static_cast<std::size_t>(std::floor((t_end - t0) / sample_dt + 1e-9)) + 1;
    out.reserve(n_samples);

    std::size_t k = 0;
    while (k < n_samples) {
        if (!(table_.total > 0.0)) {
            for (; k < n_samples; ++k) record(out, t0 + static_cast<double>(k) * sample_dt, pop_);
            break;
        }
        const Event ev = next_event(table_, rng_);
        const double t_next = time_ + ev.wait;
        for (; k < n_samples && t0 + static_cast<double>(k) * sample_dt < t_next; ++k)
            record(out, t0 + static_cast<double>(k) * sample_dt, pop_);
        const Transition& tr = table_.items[ev.index];
        --pop_.counts[tr.from];
        ++pop_.counts[tr.to];
        time_ = t_next;
        ++events_;
        refresh_rates();
    }
    return out;
}

void TrajectoryConfig::validate() const {
    if (!(t_end > 0.0)) throw DomainError("t_end must be positive");
    if (!(sample_dt > 0.0)) throw DomainError("sample_dt must be positive");
    initial.validate();
}

TimeSeries simulate_population(const TrajectoryConfig& cfg, const AgentModel& model) {
    cfg.validate();
    JumpProcess process(model, cfg.initial, make_stream(cfg.seed, cfg.stream));
    return process.sample(cfg.t_end, cfg.sample_dt);
}

}  // namespace herdsim
