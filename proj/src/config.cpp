#include "herdsim/config.hpp"

#include "herdsim/errors.hpp"

#include <array>
#include <cmath>
#include <set>

namespace herdsim {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Mode, std::string_view>, 8> kModeNames{{
    {Mode::abm2, "abm2"},
    {Mode::abm3, "abm3"},
    {Mode::sde2, "sde2"},
    {Mode::sde3, "sde3"},
    {Mode::gen_class, "gen-class"},
    {Mode::returns, "returns"},
    {Mode::analyze, "analyze"},
    {Mode::predict, "predict"},
}};

const std::set<std::string> kTopKeys{"mode", "seed", "model", "integrator", "market", "analysis", "output"};
const std::set<std::string> kModelKeys{"eps1", "eps2",  "h",   "n_agents", "alpha", "eps_cf", "eps_fc",
                                       "eps_cc", "H",   "h1",  "eta",      "lambda", "x_min", "x_max"};
const std::set<std::string> kIntegratorKeys{"kappa", "max_dt",  "t_end",       "sample_dt",
                                            "delta", "initial", "trajectories"};
const std::set<std::string> kMarketKeys{"r0_bar", "a",      "b",     "b_over_a", "a_sqrt_T", "b_sqrt_T",
                                        "lambda", "window_T", "mu",  "sigma",    "noise",    "input"};
const std::set<std::string> kAnalysisKeys{"input",    "column",        "absolute",       "burn_in",
                                          "n_bins",   "segments",      "pdf_fit_range",  "psd_fit_ranges",
                                          "hill_k"};
const std::set<std::string> kOutputKeys{"time_unit"};

/// One JSON object with its dotted path; getters write resolved values back.
class Block {
public:
    Block(json& obj, std::string path) : obj_(obj), path_(std::move(path)) {}

    std::string at(const std::string& key) const { return path_ + "." + key; }
    bool has(const std::string& key) const { return obj_.contains(key); }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        if (!has(key)) {
            if (!fallback) throw ConfigError(at(key), "required field is missing");
            obj_[key] = *fallback;
            return *fallback;
        }
        const json& v = obj_[key];
        if (!v.is_number()) throw ConfigError(at(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(at(key), "expected a finite number");
        return d;
    }

    std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt) {
        if (!has(key)) {
            if (!fallback) throw ConfigError(at(key), "required field is missing");
            obj_[key] = *fallback;
            return *fallback;
        }
        const json& v = obj_[key];
        if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
        return v.get<std::int64_t>();
    }

    std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
        if (!has(key)) {
            if (!fallback) throw ConfigError(at(key), "required field is missing");
            obj_[key] = *fallback;
            return *fallback;
        }
        if (!obj_[key].is_string()) throw ConfigError(at(key), "expected a string");
        return obj_[key].get<std::string>();
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) {
            obj_[key] = fallback;
            return fallback;
        }
        if (!obj_[key].is_boolean()) throw ConfigError(at(key), "expected true or false");
        return obj_[key].get<bool>();
    }

    double positive(const std::string& key, std::optional<double> fallback = std::nullopt) {
        const double v = number(key, fallback);
        if (!(v > 0.0)) throw ConfigError(at(key), "must be positive");
        return v;
    }

    double nonnegative(const std::string& key, std::optional<double> fallback = std::nullopt) {
        const double v = number(key, fallback);
        if (!(v >= 0.0)) throw ConfigError(at(key), "must be nonnegative");
        return v;
    }

    void set(const std::string& key, json value) { obj_[key] = std::move(value); }
    void erase(const std::string& key) { obj_.erase(key); }
    json& raw() { return obj_; }
    const std::string& path() const { return path_; }

private:
    json& obj_;
    std::string path_;
};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
    if (!obj.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key))
            throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
    }
}

Block require_block(json& doc, const std::string& name) {
    if (!doc.contains(name)) throw ConfigError(name, "missing block required by this mode");
    return Block(doc[name], name);
}

std::pair<double, double> range_pair(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(path, "expected [lo, hi]");
    const double lo = v[0].get<double>();
    const double hi = v[1].get<double>();
    if (!(lo > 0.0 && hi > lo)) throw ConfigError(path, "need 0 < lo < hi");
    return {lo, hi};
}

void parse_two_state(Block model, RunConfig& cfg) {
    auto& p = cfg.two_state;
    p.epsilon1 = model.positive("eps1");
    p.epsilon2 = model.positive("eps2");
    p.h = model.positive("h", 1.0);
    p.alpha = model.nonnegative("alpha", kDefaultAlpha);
    p.n_agents = model.integer("n_agents", 1000);
    if (p.n_agents < 2) throw ConfigError(model.at("n_agents"), "must be at least 2");
    cfg.n_agents = p.n_agents;
}

void parse_three_state(Block model, RunConfig& cfg, bool needs_agents) {
    auto& p = cfg.three_state;
    p.eps_cf = model.positive("eps_cf");
    p.eps_fc = model.positive("eps_fc");
    p.eps_cc = model.positive("eps_cc");
    p.big_h = model.number("H");
    if (!(p.big_h >= 1.0)) throw ConfigError(model.at("H"), "must be at least 1");
    p.alpha = model.nonnegative("alpha", kDefaultAlpha);
    p.h1 = model.positive("h1", 1.0);
    if (needs_agents) {
        cfg.n_agents = model.integer("n_agents", 1000);
        if (cfg.n_agents < 2) throw ConfigError(model.at("n_agents"), "must be at least 2");
    }
}

void parse_general_class(Block model, RunConfig& cfg) {
    auto& g = cfg.general;
    if (model.has("eta") || model.has("lambda")) {
        if (model.has("alpha") || model.has("eps2"))
            throw ConfigError(model.path(), "give either eta/lambda or alpha/eps2, not both");
        g.eta = model.number("eta");
        g.lambda = model.number("lambda");
    } else {
        const double alpha = model.nonnegative("alpha", kDefaultAlpha);
        const double eps2 = model.positive("eps2");
        const ExponentPrediction e = predict_exponents(alpha, eps2);
        g.eta = e.eta;
        g.lambda = e.lambda;
    }
    g.x_min = model.positive("x_min", 1.0);
    g.x_max = model.positive("x_max", 1000.0);
    if (!(g.x_max > g.x_min)) throw ConfigError(model.at("x_max"), "must exceed x_min");
}

void parse_integrator(Block integ, RunConfig& cfg, bool stochastic) {
    auto& ic = cfg.integrator;
    ic.t_end = integ.positive("t_end");
    ic.sample_dt = integ.positive("sample_dt");
    if (stochastic) {
        ic.kappa = integ.number("kappa", 0.1);
        if (!(ic.kappa > 0.0 && ic.kappa <= 1.0)) throw ConfigError(integ.at("kappa"), "must lie in (0, 1]");
        ic.max_dt = integ.positive("max_dt", 0.01);
    }
    cfg.delta = integ.number("delta", kDefaultDelta);
    if (!(cfg.delta > 0.0 && cfg.delta < 0.5)) throw ConfigError(integ.at("delta"), "must lie in (0, 0.5)");
    const std::int64_t n = integ.integer("trajectories", 1);
    if (n < 1) throw ConfigError(integ.at("trajectories"), "must be at least 1");
    cfg.trajectories = static_cast<std::size_t>(n);
}

void parse_initial(Block integ, RunConfig& cfg) {
    if (!integ.has("initial")) return;
    json& init = integ.raw()["initial"];
    const std::string path = integ.at("initial");
    if (cfg.mode == Mode::abm3 || cfg.mode == Mode::sde3) {
        reject_unknown(init, {"n_f", "xi"}, path);
        Block b(init, path);
        const double nf = b.number("n_f");
        const double xi = b.number("xi", 0.0);
        if (!(nf >= 0.0 && nf <= 1.0)) throw ConfigError(b.at("n_f"), "must lie in [0, 1]");
        if (!(xi >= -1.0 && xi <= 1.0)) throw ConfigError(b.at("xi"), "must lie in [-1, 1]");
        cfg.initial_macro = MacroState{nf, xi};
    } else {
        if (!init.is_number()) throw ConfigError(path, "expected a number");
        const double x = init.get<double>();
        if (cfg.mode == Mode::gen_class) {
            if (!(x >= cfg.general.x_min && x <= cfg.general.x_max))
                throw ConfigError(path, "must lie in [x_min, x_max]");
        } else if (!(x >= 0.0 && x <= 1.0)) {
            throw ConfigError(path, "must lie in [0, 1]");
        }
        cfg.initial_x = x;
    }
}

void parse_market(Block m, RunConfig& cfg) {
    auto& mk = cfg.market;
    cfg.market_input = m.string("input");
    mk.window_T = m.positive("window_T");
    mk.r0_bar = m.positive("r0_bar", 1.0);
    mk.lambda_q = m.number("lambda", 5.0);
    if (!(mk.lambda_q > 3.0)) throw ConfigError(m.at("lambda"), "must exceed 3");
    mk.mu = m.number("mu", 0.0);
    mk.sigma = m.nonnegative("sigma", 0.0);

    const double sqrt_t = std::sqrt(mk.window_T);
    const bool scaled = m.has("a_sqrt_T") || m.has("b_sqrt_T");
    if (scaled) {
        if (m.has("a") || m.has("b") || m.has("b_over_a"))
            throw ConfigError(m.path(), "a_sqrt_T/b_sqrt_T exclude a, b and b_over_a");
        mk.a = m.nonnegative("a_sqrt_T") / sqrt_t;
        mk.b = m.nonnegative("b_sqrt_T") / sqrt_t;
        m.erase("a_sqrt_T");
        m.erase("b_sqrt_T");
    } else if (m.has("b_over_a")) {
        if (m.has("b")) throw ConfigError(m.at("b"), "b and b_over_a are mutually exclusive");
        mk.a = m.nonnegative("a", 1.0);
        mk.b = m.nonnegative("b_over_a") * mk.a;
        m.erase("b_over_a");
    } else {
        mk.a = m.nonnegative("a", 1.0);
        mk.b = m.nonnegative("b", 1.0);
    }
    m.set("a", mk.a);
    m.set("b", mk.b);

    const std::string noise = m.string("noise", "q_gaussian");
    if (noise == "q_gaussian") {
        mk.noise = ExogenousNoise::q_gaussian;
    } else if (noise == "gaussian") {
        mk.noise = ExogenousNoise::gaussian;
    } else {
        throw ConfigError(m.at("noise"), "expected \"q_gaussian\" or \"gaussian\"");
    }
}

void parse_analysis(Block an, RunConfig& cfg) {
    auto& a = cfg.analysis;
    a.input = an.string("input");
    a.column = an.string("column", "");
    a.absolute = an.boolean("absolute", true);
    a.burn_in = an.number("burn_in", 0.1);
    if (!(a.burn_in >= 0.0 && a.burn_in < 1.0)) throw ConfigError(an.at("burn_in"), "must lie in [0, 1)");
    const auto bins = an.integer("n_bins", 40);
    if (bins < 2) throw ConfigError(an.at("n_bins"), "must be at least 2");
    a.n_bins = static_cast<std::size_t>(bins);
    const auto segs = an.integer("segments", 16);
    if (segs < 1) throw ConfigError(an.at("segments"), "must be at least 1");
    a.segments = static_cast<std::size_t>(segs);
    const auto k = an.integer("hill_k", 0);
    if (k < 0) throw ConfigError(an.at("hill_k"), "must be nonnegative");
    a.hill_k = static_cast<std::size_t>(k);
    if (an.has("pdf_fit_range")) a.pdf_fit_range = range_pair(an.raw()["pdf_fit_range"], an.at("pdf_fit_range"));
    if (an.has("psd_fit_ranges")) {
        const json& v = an.raw()["psd_fit_ranges"];
        if (!v.is_array()) throw ConfigError(an.at("psd_fit_ranges"), "expected a list of [lo, hi]");
        for (std::size_t i = 0; i < v.size(); ++i)
            a.psd_fit_ranges.push_back(range_pair(v[i], an.at("psd_fit_ranges") + "[" + std::to_string(i) + "]"));
    }
}

}  // namespace

std::string_view to_string(Mode m) {
    for (const auto& [mode, name] : kModeNames)
        if (mode == m) return name;
    return "unknown";
}

Mode parse_mode(std::string_view name) {
    for (const auto& [mode, n] : kModeNames)
        if (n == name) return mode;
    throw ConfigError("mode", "unknown mode '" + std::string(name) + "'");
}

RunConfig parse_config(std::string_view text, std::optional<Mode> mode) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    return parse_config_json(doc, mode);
}

RunConfig parse_config_json(const json& input, std::optional<Mode> mode) {
    json doc = input;
    reject_unknown(doc, kTopKeys, "");
    for (const auto& [name, keys] : {std::pair{"model", &kModelKeys}, std::pair{"integrator", &kIntegratorKeys},
                                     std::pair{"market", &kMarketKeys}, std::pair{"analysis", &kAnalysisKeys},
                                     std::pair{"output", &kOutputKeys}}) {
        if (doc.contains(name)) reject_unknown(doc[name], *keys, name);
    }

    RunConfig cfg;
    if (doc.contains("mode")) {
        if (!doc["mode"].is_string()) throw ConfigError("mode", "expected a string");
        const Mode declared = parse_mode(doc["mode"].get<std::string>());
        if (mode && *mode != declared)
            throw ConfigError("mode", "config declares mode '" + std::string(to_string(declared)) + "'");
        cfg.mode = declared;
    } else if (mode) {
        cfg.mode = *mode;
    } else {
        throw ConfigError("mode", "no mode given");
    }
    doc["mode"] = std::string(to_string(cfg.mode));

    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
        cfg.seed = doc["seed"].get<std::uint64_t>();
    } else {
        doc["seed"] = cfg.seed;
    }

    switch (cfg.mode) {
        case Mode::abm2:
        case Mode::sde2:
            parse_two_state(require_block(doc, "model"), cfg);
            parse_integrator(require_block(doc, "integrator"), cfg, cfg.mode == Mode::sde2);
            parse_initial(Block(doc["integrator"], "integrator"), cfg);
            break;
        case Mode::abm3:
        case Mode::sde3:
            parse_three_state(require_block(doc, "model"), cfg, cfg.mode == Mode::abm3);
            parse_integrator(require_block(doc, "integrator"), cfg, cfg.mode == Mode::sde3);
            parse_initial(Block(doc["integrator"], "integrator"), cfg);
            break;
        case Mode::gen_class:
            parse_general_class(require_block(doc, "model"), cfg);
            parse_integrator(require_block(doc, "integrator"), cfg, true);
            parse_initial(Block(doc["integrator"], "integrator"), cfg);
            break;
        case Mode::returns:
            parse_market(require_block(doc, "market"), cfg);
            break;
        case Mode::analyze:
            parse_analysis(require_block(doc, "analysis"), cfg);
            break;
        case Mode::predict: {
            Block model = require_block(doc, "model");
            cfg.two_state.alpha = model.nonnegative("alpha", kDefaultAlpha);
            cfg.eps2_predict = model.positive("eps2");
            break;
        }
    }

    if (doc.contains("output")) {
        Block out(doc["output"], "output");
        const std::string unit = out.string("time_unit", "scaled");
        if (unit == "seconds") {
            const bool three = cfg.mode == Mode::abm3 || cfg.mode == Mode::sde3 || cfg.mode == Mode::returns;
            const char* key = three ? "h1" : "h";
            // Checked against the input: parsing fills in a default rate.
            if (!input.contains("model") || !input["model"].contains(key))
                throw ConfigError("output.time_unit", std::string("seconds require model.") + key);
            const json& rate = input["model"][key];
            if (!rate.is_number() || !(rate.get<double>() > 0.0))
                throw ConfigError(std::string("model.") + key, "must be positive");
            cfg.seconds = true;
            cfg.time_unit = rate.get<double>();
        } else if (unit != "scaled") {
            throw ConfigError("output.time_unit", "expected \"scaled\" or \"seconds\"");
        }
    }

    cfg.resolved = std::move(doc);
    return cfg;
}

}  // namespace herdsim
