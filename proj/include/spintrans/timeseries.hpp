// timeseries.hpp — Sampled populations of a run plus CSV emission

#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>

#include "spintrans/model.hpp"

namespace spintrans {

// Sampled diagonal populations over the StateLayout, plus per-sample diagnostics.
// Rows of `populations` are ordered (ground, sites, pseudomodes, sink) and sum to 1.
struct TimeSeries {
    StateLayout layout;
    Eigen::VectorXd times;
    Eigen::MatrixXd populations;   // sample_count x layout.dim()
    Eigen::VectorXd purity;        // Tr(rho^2)
    Eigen::VectorXd trace_error;   // |Tr(rho) - 1|

    // In-memory diagnostics, not part of the CSV schema.
    Eigen::VectorXd min_eigenvalue;    // smallest eigenvalue of rho per sample
    Eigen::VectorXd hermiticity_error; // max |rho - rho^dagger| per sample

    // Sink parameters for the quadrature cross-check; attach_index < 0 when no sink feeds.
    double gamma_sink{0.0};
    int attach_index{-1};

    int sample_count() const { return static_cast<int>(times.size()); }
};

// Header "t,p_ground,p_site_1..p_site_NM,p_pm_1..p_pm_P,p_sink,purity,trace_err",
// one row per sample, full double precision.
void write_timeseries_csv(const TimeSeries& ts, std::ostream& os);
void write_timeseries_csv(const TimeSeries& ts, const std::string& path);

}  // namespace spintrans
