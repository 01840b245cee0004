#include "herdsim/run.hpp"

#include "herdsim/agents.hpp"
#include "herdsim/csv.hpp"
#include "herdsim/errors.hpp"
#include "herdsim/market.hpp"
#include "herdsim/parallel.hpp"
#include "herdsim/sde.hpp"
#include "herdsim/stats.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#ifndef HERDSIM_VERSION
#define HERDSIM_VERSION "dev"
#endif

namespace herdsim {

namespace fs = std::filesystem;
using nlohmann::json;

double default_initial_x(const TwoStateParams& p) { return p.epsilon1 / (p.epsilon1 + p.epsilon2); }

MacroState default_initial_macro(const ThreeStateParams& p) { return {p.fixed_point_nf(), 0.0}; }

AgentPopulation population_from_macro(const MacroState& s, std::int64_t n) {
    const auto f = std::clamp<std::int64_t>(std::llround(s.n_f * static_cast<double>(n)), 0, n);
    const std::int64_t chartists = n - f;
    const auto optimists = std::clamp<std::int64_t>(
        std::llround(0.5 * (1.0 + s.xi) * static_cast<double>(chartists)), 0, chartists);
    return AgentPopulation::three_state(f, chartists - optimists, optimists);
}

namespace {

void write_json(const fs::path& path, const json& j) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << j.dump(2) << '\n';
}

std::string data_name(const RunConfig& cfg, std::size_t index) {
    std::string base(to_string(cfg.mode));
    if (cfg.trajectories == 1) return base + ".csv";
    char suffix[16];
    std::snprintf(suffix, sizeof suffix, "_%03zu", index);
    return base + suffix + ".csv";
}

double output_time_unit(const RunConfig& cfg) { return cfg.seconds ? cfg.time_unit : 1.0; }

std::vector<fs::path> run_trajectories(const RunConfig& cfg, const fs::path& out_dir,
                                       const std::function<TimeSeries(std::uint64_t)>& simulate) {
    std::vector<fs::path> names(cfg.trajectories);
    parallel_for(cfg.trajectories, [&](std::size_t i) {
        names[i] = data_name(cfg, i);
        write_series(out_dir / names[i], simulate(i), output_time_unit(cfg));
    });
    return names;
}

std::vector<fs::path> run_abm(const RunConfig& cfg, const fs::path& out_dir) {
    AgentModel model = TwoStateModel{};
    AgentPopulation initial;
    if (cfg.mode == Mode::abm2) {
        TwoStateParams p = cfg.two_state;
        const double x0 = cfg.initial_x.value_or(default_initial_x(p));
        initial = AgentPopulation::two_state(
            p.n_agents, std::llround(x0 * static_cast<double>(p.n_agents)));
        model = TwoStateModel{p, cfg.delta};
    } else {
        initial = population_from_macro(cfg.initial_macro.value_or(default_initial_macro(cfg.three_state)),
                                        cfg.n_agents);
        model = ThreeStateModel(cfg.three_state);
    }
    return run_trajectories(cfg, out_dir, [&](std::uint64_t i) {
        TrajectoryConfig tc;
        tc.t_end = cfg.integrator.t_end;
        tc.sample_dt = cfg.integrator.sample_dt;
        tc.seed = cfg.seed;
        tc.stream = i;
        tc.initial = initial;
        return simulate_population(tc, model);
    });
}

std::vector<fs::path> run_sde(const RunConfig& cfg, const fs::path& out_dir) {
    SdeSystem system;
    IntegratorConfig ic = cfg.integrator;
    ic.seed = cfg.seed;
    switch (cfg.mode) {
        case Mode::sde2:
            system = two_state_system(cfg.two_state, cfg.delta);
            ic.initial = {cfg.initial_x.value_or(default_initial_x(cfg.two_state)), 0.0};
            break;
        case Mode::sde3: {
            system = three_state_system(cfg.three_state, cfg.delta);
            const MacroState m = cfg.initial_macro.value_or(default_initial_macro(cfg.three_state));
            ic.initial = {m.n_f, m.xi};
            break;
        }
        default:
            system = general_class_system(cfg.general.eta, cfg.general.lambda, cfg.general.x_min,
                                          cfg.general.x_max);
            ic.initial = {cfg.initial_x.value_or(cfg.general.x_min), 0.0};
            break;
    }
    return run_trajectories(cfg, out_dir, [&](std::uint64_t i) {
        IntegratorConfig local = ic;
        local.stream = i;
        return integrate(system, local);
    });
}

std::vector<fs::path> run_returns(const RunConfig& cfg, const fs::path& out_dir) {
    TimeSeries input = read_series(cfg.market_input);
    const double unit = output_time_unit(cfg);
    for (double& t : input.t) t *= unit;

    TimeSeries prices;
    if (std::find(input.names.begin(), input.names.end(), "p") != input.names.end()) {
        prices = TimeSeries({"p"});
        prices.t = input.t;
        prices.columns[0] = input.columns[input.index_of("p")];
    } else {
        prices = log_price_series(input, cfg.market.r0_bar);
    }
    Engine rng = make_stream(cfg.seed, 0);
    const TimeSeries returns = synthesize_returns(prices, cfg.market, rng);
    write_series(out_dir / "returns.csv", returns, unit);
    return {"returns.csv"};
}

json fit_json(const PowerLawFit& f) {
    return {{"exponent", f.exponent}, {"std_error", f.std_error}, {"lo", f.x_lo},
            {"hi", f.x_hi},         {"points", f.points},       {"residual_rms", f.residual_rms}};
}

std::vector<fs::path> run_analyze(const RunConfig& cfg, const fs::path& out_dir) {
    const auto& an = cfg.analysis;
    const TimeSeries series = read_series(an.input).tail(an.burn_in);
    std::string column = an.column;
    if (column.empty())
        column = std::find(series.names.begin(), series.names.end(), "r") != series.names.end()
                     ? "r"
                     : series.names.at(0);
    const auto raw = series.column(column);
    std::vector<double> values(raw.begin(), raw.end());
    if (an.absolute)
        for (double& v : values) v = std::abs(v);

    json report;
    report["column"] = column;
    report["absolute"] = an.absolute;
    report["samples"] = values.size();

    std::vector<double> positive;
    positive.reserve(values.size());
    for (double v : values)
        if (v > 0.0) positive.push_back(v);

    const HistogramEstimate hist = pdf_log_binned(positive, an.n_bins);
    const auto centers = hist.centers();
    write_csv(out_dir / "pdf.csv", {"x", "p"}, {centers, hist.density});
    const auto range = an.pdf_fit_range.value_or(default_pdf_fit_range(positive));
    try {
        report["pdf_fit"] = fit_json(fit_pdf(hist, range.first, range.second));
    } catch (const InsufficientData& e) {
        report["pdf_fit"] = {{"error", e.what()}};
    }

    const std::size_t k = an.hill_k ? an.hill_k : positive.size() / 100;
    try {
        const std::array<std::size_t, 4> ks{std::max<std::size_t>(k / 4, 1), std::max<std::size_t>(k / 2, 1), k,
                                            std::min(2 * k, positive.size() / 10 - 1)};
        const HillStability st = hill_stability(positive, ks);
        json est = json::array();
        for (const auto& e : st.estimates)
            est.push_back({{"k", e.k}, {"pdf_exponent", e.pdf_exponent}, {"std_error", e.std_error}});
        report["hill"] = {{"estimates", est}, {"spread", st.spread}, {"stable", st.stable}};
    } catch (const std::invalid_argument& e) {
        report["hill"] = {{"error", e.what()}};
    }

    const SpectrumEstimate psd = psd_welch(values, series.dt(), an.segments);
    write_csv(out_dir / "psd.csv", {"f", "S"}, {psd.frequency, psd.power});
    report["psd_fits"] = json::array();
    for (std::size_t i = 0; i < an.psd_fit_ranges.size(); ++i) {
        const auto [lo, hi] = an.psd_fit_ranges[i];
        try {
            report["psd_fits"].push_back(fit_json(fit_psd(psd, lo, hi)));
        } catch (const InsufficientData& e) {
            throw ConfigError("analysis.psd_fit_ranges[" + std::to_string(i) + "]", e.what());
        }
    }
    write_json(out_dir / "analysis.json", report);
    return {"pdf.csv", "psd.csv", "analysis.json"};
}

std::vector<fs::path> run_predict(const RunConfig& cfg, const fs::path& out_dir) {
    const ExponentPrediction e = predict_exponents(cfg.two_state.alpha, cfg.eps2_predict);
    write_json(out_dir / "predict.json", {{"eta", e.eta}, {"lambda", e.lambda}, {"beta", e.beta}});
    return {"predict.json"};
}

}  // namespace

std::vector<fs::path> execute(const RunConfig& cfg, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    std::vector<fs::path> outputs;
    switch (cfg.mode) {
        case Mode::abm2:
        case Mode::abm3:
            outputs = run_abm(cfg, out_dir);
            break;
        case Mode::sde2:
        case Mode::sde3:
        case Mode::gen_class:
            outputs = run_sde(cfg, out_dir);
            break;
        case Mode::returns:
            outputs = run_returns(cfg, out_dir);
            break;
        case Mode::analyze:
            outputs = run_analyze(cfg, out_dir);
            break;
        case Mode::predict:
            outputs = run_predict(cfg, out_dir);
            break;
    }
    json files = json::array();
    for (const auto& p : outputs) files.push_back(p.string());
    write_json(out_dir / "manifest.json", {{"version", HERDSIM_VERSION},
                                           {"mode", std::string(to_string(cfg.mode))},
                                           {"seed", cfg.seed},
                                           {"config", cfg.resolved},
                                           {"outputs", files}});
    outputs.emplace_back("manifest.json");
    return outputs;
}

int run(const RunConfig& cfg, const fs::path& out_dir, std::ostream& err) {
    try {
        execute(cfg, out_dir);
        return kExitOk;
    } catch (const NumericFailure& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const AbsorbingState& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InsufficientData& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace herdsim
