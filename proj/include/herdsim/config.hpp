#pragma once

// JSON run configuration for the herdsim command-line tool.

#include "herdsim/kinetics.hpp"
#include "herdsim/market.hpp"
#include "herdsim/sde.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace herdsim {

enum class Mode { abm2, abm3, sde2, sde3, gen_class, returns, analyze, predict };

std::string_view to_string(Mode m);
/// Throws ConfigError for unknown names.
Mode parse_mode(std::string_view name);

struct GeneralClassConfig {
    double eta = 2.0;
    double lambda = 4.0;
    double x_min = 1.0;
    double x_max = 1000.0;
};

struct AnalysisConfig {
    std::string input;
    std::string column;  ///< empty: "r" if present, else the first data column
    bool absolute = true;
    double burn_in = 0.1;
    std::size_t n_bins = 40;
    std::size_t segments = 16;
    std::optional<std::pair<double, double>> pdf_fit_range;
    std::vector<std::pair<double, double>> psd_fit_ranges;
    std::size_t hill_k = 0;  ///< 0: one percent of the samples
};

struct RunConfig {
    Mode mode = Mode::predict;
    std::uint64_t seed = 0;

    TwoStateParams two_state;
    ThreeStateParams three_state;
    GeneralClassConfig general;
    double eps2_predict = 2.0;
    std::int64_t n_agents = 1000;

    IntegratorConfig integrator;
    double delta = kDefaultDelta;
    std::size_t trajectories = 1;
    std::optional<double> initial_x;        ///< two-state / general class
    std::optional<MacroState> initial_macro;  ///< three-state

    MarketParams market;
    std::string market_input;

    AnalysisConfig analysis;

    bool seconds = false;     ///< output timestamps in physical seconds
    double time_unit = 1.0;   ///< scaled time per second (h or h1) when `seconds`

    /// Resolved configuration with defaults applied; parse_config_json(resolved) reproduces *this.
    nlohmann::json resolved;
};

/// Parses and validates a JSON document. `mode` overrides (and must agree with) the
/// document's "mode" key. Throws ConfigError with a field path such as "model.eps_cc".
RunConfig parse_config(std::string_view text, std::optional<Mode> mode = std::nullopt);
RunConfig parse_config_json(const nlohmann::json& doc, std::optional<Mode> mode = std::nullopt);

}  // namespace herdsim
