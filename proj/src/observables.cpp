// observables.cpp — Sink-efficiency metrics and cross-run comparison

#include "spintrans/observables.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace spintrans {
namespace {

void put(std::ostream& os, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    os << buf;
}

// Cumulative trapezoid of column `col` against ts.times.
Eigen::VectorXd cumulative_trapezoid(const TimeSeries& ts, int col) {
    Eigen::VectorXd out(ts.sample_count());
    out(0) = 0.0;
    for (int k = 1; k < ts.sample_count(); ++k) {
        const double dt = ts.times(k) - ts.times(k - 1);
        out(k) = out(k - 1) +
                 0.5 * dt * (ts.populations(k, col) + ts.populations(k - 1, col));
    }
    return out;
}

}  // namespace

Eigen::VectorXd sink_population(const TimeSeries& ts) {
    return ts.populations.col(ts.layout.sink());
}

double sink_quadrature_residual(const TimeSeries& ts) {
    if (ts.attach_index < 0) {
        throw std::invalid_argument("sink_quadrature_residual: run has no sink feed");
    }
    // P_sink(t) grows as gamma_sink * integral of the attach-site population; compare
    // the recorded sink column against the trapezoid quadrature of that feed.
    Eigen::VectorXd fed = ts.gamma_sink * cumulative_trapezoid(ts, ts.attach_index);
    fed.array() += ts.populations(0, ts.layout.sink());
    return (sink_population(ts) - fed).cwiseAbs().maxCoeff();
}

EfficiencyReport efficiency_report(const TimeSeries& ts) {
    const Eigen::VectorXd sink = sink_population(ts);
    EfficiencyReport report;
    report.p_sink_final = sink(sink.size() - 1);

    // AUC by trapezoid over the sampled grid.
    report.auc = 0.0;
    for (int k = 1; k < ts.sample_count(); ++k) {
        report.auc += 0.5 * (ts.times(k) - ts.times(k - 1)) * (sink(k) + sink(k - 1));
    }

    // First crossing of half the final value, linearly interpolated.
    const double half = 0.5 * report.p_sink_final;
    if (report.p_sink_final > 0.0) {
        for (int k = 0; k < ts.sample_count(); ++k) {
            if (sink(k) >= half) {
                if (k == 0 || sink(k) == sink(k - 1)) {
                    report.t_half = ts.times(k);
                } else {
                    const double f = (half - sink(k - 1)) / (sink(k) - sink(k - 1));
                    report.t_half = ts.times(k - 1) + f * (ts.times(k) - ts.times(k - 1));
                }
                break;
            }
        }
    }
    return report;
}

ComparisonTable compare_runs(const std::vector<TimeSeries>& runs,
                             const std::vector<std::string>& labels) {
    if (runs.empty() || runs.size() != labels.size()) {
        throw std::invalid_argument("compare_runs: need one label per run");
    }
    const Eigen::VectorXd& times = runs.front().times;
    for (const TimeSeries& ts : runs) {
        if (ts.times.size() != times.size() ||
            (ts.times - times).cwiseAbs().maxCoeff() != 0.0) {
            throw std::invalid_argument("compare_runs: time grids differ");
        }
    }

    ComparisonTable table;
    table.times = times;
    table.labels = labels;
    table.p_sink.resize(times.size(), static_cast<Eigen::Index>(runs.size()));
    for (std::size_t i = 0; i < runs.size(); ++i) {
        table.p_sink.col(static_cast<Eigen::Index>(i)) = sink_population(runs[i]);
        table.finals.push_back(table.p_sink(times.size() - 1, static_cast<Eigen::Index>(i)));
    }
    table.order.resize(runs.size());
    std::iota(table.order.begin(), table.order.end(), 0);
    std::stable_sort(table.order.begin(), table.order.end(),
                     [&](int a, int b) { return table.finals[static_cast<std::size_t>(a)] <
                                                table.finals[static_cast<std::size_t>(b)]; });
    return table;
}

void write_comparison_csv(const ComparisonTable& table, std::ostream& os) {
    os << "t";
    for (const std::string& label : table.labels) os << ",p_sink[" << label << "]";
    os << '\n';
    for (Eigen::Index k = 0; k < table.times.size(); ++k) {
        put(os, table.times(k));
        for (Eigen::Index c = 0; c < table.p_sink.cols(); ++c) {
            os << ',';
            put(os, table.p_sink(k, c));
        }
        os << '\n';
    }
}

void write_comparison_csv(const ComparisonTable& table, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_comparison_csv(table, os);
    if (!os) throw std::runtime_error("write failed: " + path);
}

void write_report_csv(const EfficiencyReport& report, std::ostream& os) {
    os << "p_sink_final,t_half,auc\n";
    put(os, report.p_sink_final);
    os << ',';
    if (report.t_half) put(os, *report.t_half);
    os << ',';
    put(os, report.auc);
    os << '\n';
}

void write_report_csv(const EfficiencyReport& report, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_report_csv(report, os);
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace spintrans
