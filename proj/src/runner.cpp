// runner.cpp — run/sweep/verify command bodies and the exit-code mapping

#include "spintrans/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <thread>

#include "spintrans/dynamics.hpp"
#include "spintrans/hamiltonian.hpp"
#include "spintrans/observables.hpp"

namespace spintrans {
namespace {

namespace fs = std::filesystem;

struct RunProducts {
    TimeSeries series;
    EfficiencyReport report;
    std::vector<std::string> warnings;
};

RunProducts execute_scenario(const Scenario& scenario) {
    const PseudomodeModel pm = extract_pseudomodes(scenario.reservoir);
    const ExtendedHamiltonian h = build_site_hamiltonian(scenario.system, pm);
    const LindbladGenerator gen = build_generator(h, pm, scenario.sink);
    const ExtendedState rho0 = initial_site_state(h.layout, scenario.run.initial_site);

    RunProducts products;
    products.series = integrate(gen, rho0, scenario.run);
    products.report = efficiency_report(products.series);
    products.warnings = scenario.warnings;
    return products;
}

void write_products(const std::string& out_dir, const RunProducts& products) {
    fs::create_directories(out_dir);
    write_timeseries_csv(products.series, (fs::path(out_dir) / "timeseries.csv").string());
    write_report_csv(products.report, (fs::path(out_dir) / "report.csv").string());
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const config_error*>(&e) != nullptr) return kExitConfigError;
    if (dynamic_cast<const invariant_error*>(&e) != nullptr) return kExitRuntimeError;
    return kExitRuntimeError;
}

const char* exit_label(int code) {
    return code == kExitConfigError ? "config error" : "error";
}

}  // namespace

int cli_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<Override>& overrides) {
    try {
        const Scenario scenario = load_scenario(config_path, overrides);
        for (const std::string& warning : scenario.warnings) {
            std::cerr << "warning: " << warning << '\n';
        }
        const RunProducts products = execute_scenario(scenario);
        write_products(out_dir, products);
        std::printf("%.17g\n", products.report.p_sink_final);
        return kExitOk;
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        std::cerr << exit_label(code) << ": " << e.what() << '\n';
        return code;
    }
}

int cli_sweep(const std::string& config_path, const std::string& out_dir,
              const std::vector<Override>& overrides, const std::vector<SweepAxis>& axes,
              int jobs) {
    struct GridPoint {
        std::string label;
        std::vector<Override> overrides;
        bool ok{false};
        int code{kExitRuntimeError};
        std::string error;
        RunProducts products;
    };

    std::vector<GridPoint> grid;
    try {
        if (axes.empty() || axes.size() > 3) {
            throw config_error("sweep needs between 1 and 3 --set axes");
        }
        for (const SweepAxis& axis : axes) {
            if (axis.values.empty()) {
                throw config_error("sweep axis \"" + axis.path + "\" has no values");
            }
        }
        // Cross product, last axis fastest; labels and directory names coincide.
        grid.push_back(GridPoint{"", overrides, false, kExitRuntimeError, "", {}});
        for (const SweepAxis& axis : axes) {
            std::vector<GridPoint> next;
            for (const GridPoint& base : grid) {
                for (const std::string& value : axis.values) {
                    GridPoint point = base;
                    const std::string part = axis.path + "=" + value;
                    point.label = point.label.empty() ? part : point.label + "_" + part;
                    point.overrides.push_back(Override{axis.path, value});
                    next.push_back(std::move(point));
                }
            }
            grid = std::move(next);
        }
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        std::cerr << exit_label(code) << ": " << e.what() << '\n';
        return code;
    }

    const int worker_count =
        std::max(1, jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency()));
    std::atomic<std::size_t> cursor{0};
    auto work = [&]() {
        for (std::size_t i = cursor.fetch_add(1); i < grid.size(); i = cursor.fetch_add(1)) {
            GridPoint& point = grid[i];
            try {
                const Scenario scenario = load_scenario(config_path, point.overrides);
                point.products = execute_scenario(scenario);
                point.ok = true;
                point.code = kExitOk;
            } catch (const std::exception& e) {
                point.ok = false;
                point.code = exit_code_for(e);
                point.error = e.what();
            }
        }
    };
    std::vector<std::thread> workers;
    for (int w = 1; w < worker_count; ++w) workers.emplace_back(work);
    work();
    for (std::thread& worker : workers) worker.join();

    // Sequential, grid-ordered reporting and merge.
    try {
        for (const GridPoint& point : grid) {
            if (!point.ok) {
                std::cerr << "grid point " << point.label << " failed: " << point.error
                          << '\n';
            }
        }
        if (auto it = std::find_if(grid.begin(), grid.end(),
                                   [](const GridPoint& p) { return !p.ok; });
            it != grid.end()) {
            return it->code;
        }

        std::vector<TimeSeries> runs;
        std::vector<std::string> labels;
        for (GridPoint& point : grid) {
            for (const std::string& warning : point.products.warnings) {
                std::cerr << "warning: " << point.label << ": " << warning << '\n';
            }
            write_products((fs::path(out_dir) / point.label).string(), point.products);
            std::printf("%s %.17g\n", point.label.c_str(),
                        point.products.report.p_sink_final);
            runs.push_back(point.products.series);
            labels.push_back(point.label);
        }
        ComparisonTable table;
        try {
            table = compare_runs(runs, labels);
        } catch (const std::invalid_argument&) {
            throw config_error(
                "sweep axes change the sampling grid; comparison.csv needs a fixed grid");
        }
        write_comparison_csv(table, (fs::path(out_dir) / "comparison.csv").string());
        return kExitOk;
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        std::cerr << exit_label(code) << ": " << e.what() << '\n';
        return code;
    }
}

int cli_verify(const VerifyOptions& opt) {
    try {
        const std::vector<CheckResult> results = run_verification(opt, std::cout);
        for (const CheckResult& result : results) {
            if (!result.passed) return kExitVerifyFailure;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        std::cerr << exit_label(code) << ": " << e.what() << '\n';
        return code;
    }
}

}  // namespace spintrans
