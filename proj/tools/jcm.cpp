// jcm.cpp — Command-line front end for the Kerr Jaynes–Cummings sweeps

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jcm/cli.hpp"

namespace {

struct Flags {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out;
    bool no_svg = false;
    bool no_timestamp = false;
};

void add_common(CLI::App* sub, Flags& f)
{
    sub->add_option("--config", f.config_path, "key = value configuration file");
    sub->add_option("--set", f.sets, "override one key (key=value), repeatable")->take_all();
    sub->add_option("--out", f.out, "output directory (default: $JCM_OUTPUT_ROOT or ./jcm-output)");
    sub->add_flag("--no-svg", f.no_svg, "skip SVG plots");
    sub->add_flag("--no-timestamp", f.no_timestamp, "omit the timestamp header line");
}

int run(jcm::Command cmd, const Flags& f, std::optional<jcm::SweepKind> hint)
{
    std::string text;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) {
            std::cerr << "error (config): cannot read " << f.config_path << '\n';
            return jcm::kExitConfig;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    jcm::RunConfig cfg;
    try {
        std::vector<jcm::ConfigEntry> overrides;
        for (const auto& s : f.sets) overrides.push_back(jcm::parse_override(s));
        if (!f.out.empty()) overrides.push_back({"output.dir", f.out, "--out", 0, 1, 1});
        if (f.no_svg) overrides.push_back({"output.svg", "false", "--no-svg", 0, 1, 1});
        if (f.no_timestamp) overrides.push_back({"output.timestamp", "false", "--no-timestamp", 0, 1, 1});
        // evolve does not need a sweep kind; its model defaults are the gp ones
        if (cmd == jcm::Command::evolve && !hint) {
            bool has_kind = false;
            for (const auto& e : jcm::tokenize_config(text)) has_kind = has_kind || e.key == "sweep.kind";
            for (const auto& e : overrides) has_kind = has_kind || e.key == "sweep.kind";
            if (!has_kind) hint = jcm::SweepKind::gp_delta;
        }
        cfg = jcm::parse_config(text, overrides, hint);
    } catch (const jcm::ConfigError& e) {
        std::cerr << "error (config)" << (f.config_path.empty() ? "" : " in " + f.config_path) << ": " << e.what()
                  << '\n';
        return jcm::kExitConfig;
    }
    return jcm::dispatch(cmd, cfg, std::cout, std::cerr);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kerr Jaynes-Cummings model: negativity and geometric-phase sweeps"};
    app.require_subcommand(1);

    Flags evolve_f, sweep_f, bloch_f, validate_f;
    auto* evolve = app.add_subcommand("evolve", "single closed/open trajectory from evolve.* initial state");
    auto* sweep = app.add_subcommand("sweep", "run the sweep named by sweep.kind");
    auto* bloch = app.add_subcommand("bloch", "Bloch-sphere paths (sweep.kind = bloch_traj)");
    auto* validate = app.add_subcommand("validate-config", "parse, validate and print the canonical configuration");
    add_common(evolve, evolve_f);
    add_common(sweep, sweep_f);
    add_common(bloch, bloch_f);
    add_common(validate, validate_f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : jcm::kExitConfig;
    }

    if (evolve->parsed()) return run(jcm::Command::evolve, evolve_f, std::nullopt);
    if (sweep->parsed()) return run(jcm::Command::sweep, sweep_f, std::nullopt);
    if (bloch->parsed()) return run(jcm::Command::bloch, bloch_f, jcm::SweepKind::bloch_traj);
    return run(jcm::Command::validate_config, validate_f, std::nullopt);
}
