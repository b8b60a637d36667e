// observables.hpp — Transport-efficiency metrics and run comparison

#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spintrans/timeseries.hpp"

namespace spintrans {

struct EfficiencyReport {
    double p_sink_final{0.0};
    std::optional<double> t_half;  // first time P_sink reaches half its final value
    double auc{0.0};               // integral of P_sink over the run
};

// The sink diagonal column; non-decreasing for any valid run.
Eigen::VectorXd sink_population(const TimeSeries& ts);

// Max over samples of |P_sink(t) - gamma_sink * trapz(rho_attach)(t)|, the
// independent quadrature route to the sink population. Meaningful on grids fine
// enough for the trapezoid error to sit below the comparison tolerance.
double sink_quadrature_residual(const TimeSeries& ts);

EfficiencyReport efficiency_report(const TimeSeries& ts);

struct ComparisonTable {
    Eigen::VectorXd times;
    Eigen::MatrixXd p_sink;           // sample_count x runs
    std::vector<std::string> labels;
    std::vector<double> finals;
    std::vector<int> order;           // run indices sorted by ascending final value
};

// Requires identical time grids; throws std::invalid_argument otherwise.
ComparisonTable compare_runs(const std::vector<TimeSeries>& runs,
                             const std::vector<std::string>& labels);

void write_comparison_csv(const ComparisonTable& table, std::ostream& os);
void write_comparison_csv(const ComparisonTable& table, const std::string& path);

void write_report_csv(const EfficiencyReport& report, std::ostream& os);
void write_report_csv(const EfficiencyReport& report, const std::string& path);

}  // namespace spintrans
