// main.cpp — spintrans command line: run one scenario, sweep a grid, or verify

#include <cstdint>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spintrans/config.hpp"
#include "spintrans/runner.hpp"

namespace {

// Splits "a,b,c" on top-level commas only, so JSON list values survive.
std::vector<std::string> split_values(const std::string& text) {
    std::vector<std::string> values;
    std::string current;
    int depth = 0;
    for (char c : text) {
        if (c == '[' || c == '{') ++depth;
        if (c == ']' || c == '}') --depth;
        if (c == ',' && depth == 0) {
            values.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    values.push_back(current);
    return values;
}

std::vector<spintrans::Override> to_overrides(const std::vector<std::string>& sets) {
    std::vector<spintrans::Override> overrides;
    for (const std::string& set : sets) overrides.push_back(spintrans::parse_override(set));
    return overrides;
}

std::vector<spintrans::SweepAxis> to_axes(const std::vector<std::string>& sets) {
    std::vector<spintrans::SweepAxis> axes;
    for (const std::string& set : sets) {
        const spintrans::Override o = spintrans::parse_override(set);
        axes.push_back(spintrans::SweepAxis{o.path, split_values(o.value)});
    }
    return axes;
}

long long integer_setting(const spintrans::Override& o, long long lo, long long hi) {
    try {
        const long long value = std::stoll(o.value);
        if (value < lo || value > hi) throw std::out_of_range("range");
        return value;
    } catch (const std::exception&) {
        throw spintrans::config_error("verify setting \"" + o.path + "\" needs an integer in [" +
                                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

spintrans::VerifyOptions to_verify_options(const std::vector<std::string>& sets) {
    spintrans::VerifyOptions opt;
    for (const std::string& set : sets) {
        const spintrans::Override o = spintrans::parse_override(set);
        if (o.path == "bath_modes") {
            opt.bath_modes = static_cast<int>(integer_setting(o, 100, 1'000'000));
        } else if (o.path == "draws") {
            opt.draws = static_cast<int>(integer_setting(o, 1, 1000));
        } else if (o.path == "seed") {
            opt.seed = static_cast<std::uint64_t>(
                integer_setting(o, 0, std::numeric_limits<long long>::max()));
        } else {
            throw spintrans::config_error("unknown verify setting \"" + o.path +
                                          "\" (expected bath_modes, draws, or seed)");
        }
    }
    return opt;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Excitation transport through a dissipative spin channel"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> sets;
    int jobs = 0;

    CLI::App* run_cmd = app.add_subcommand("run", "Integrate one scenario and write CSVs");
    run_cmd->add_option("--config", config_path, "scenario file (JSON)")->required();
    run_cmd->add_option("--out", out_dir, "output directory (default: out)");
    run_cmd->add_option("--set", sets, "key=value override, repeatable");

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Cross-product sweep over up to 3 --set axes");
    sweep_cmd->add_option("--config", config_path, "scenario file (JSON)")->required();
    sweep_cmd->add_option("--out", out_dir, "output directory (default: out)");
    sweep_cmd->add_option("--set", sets, "key=v1,v2,... sweep axis, repeatable")->required();
    sweep_cmd->add_option("--jobs", jobs, "concurrent grid points (default: hardware)");

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Run the built-in validation checks");
    verify_cmd->add_option("--set", sets,
                           "verify setting: bath_modes=N, draws=N, or seed=N");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return spintrans::kExitConfigError;
    }

    try {
        if (run_cmd->parsed()) {
            return spintrans::cli_run(config_path, out_dir, to_overrides(sets));
        }
        if (sweep_cmd->parsed()) {
            return spintrans::cli_sweep(config_path, out_dir, {}, to_axes(sets), jobs);
        }
        return spintrans::cli_verify(to_verify_options(sets));
    } catch (const spintrans::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return spintrans::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return spintrans::kExitRuntimeError;
    }
}
