// herdsim <mode> --config <path> [--seed N] [--out DIR]

#include "herdsim/config.hpp"
#include "herdsim/errors.hpp"
#include "herdsim/run.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Three-group herding model simulator"};
    std::string mode_name;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    app.add_option("mode", mode_name, "abm2 | abm3 | sde2 | sde3 | gen-class | returns | analyze | predict")
        ->required();
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--seed", seed, "Override the configured seed");
    app.add_option("--out", out_dir, "Output directory");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : herdsim::kExitConfig;
    }

    herdsim::RunConfig cfg;
    try {
        const herdsim::Mode mode = herdsim::parse_mode(mode_name);
        std::ifstream in(config_path, std::ios::binary);
        if (!in) throw herdsim::ConfigError("", "cannot read " + config_path);
        std::stringstream text;
        text << in.rdbuf();
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text.str());
        } catch (const nlohmann::json::parse_error& e) {
            throw herdsim::ConfigError("", std::string("malformed JSON: ") + e.what());
        }
        if (seed) doc["seed"] = *seed;
        cfg = herdsim::parse_config_json(doc, mode);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return herdsim::kExitConfig;
    }
    return herdsim::run(cfg, out_dir, std::cerr);
}
