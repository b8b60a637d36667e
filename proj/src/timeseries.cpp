// timeseries.cpp — CSV emission of sampled populations

#include "spintrans/timeseries.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace spintrans {
namespace {

// Full double precision, shortest form: 17 significant digits round-trip.
void put(std::ostream& os, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    os << buf;
}

}  // namespace

void write_timeseries_csv(const TimeSeries& ts, std::ostream& os) {
    const StateLayout& layout = ts.layout;
    os << "t,p_ground";
    for (int s = 1; s <= layout.n_sites(); ++s) os << ",p_site_" << s;
    for (int p = 1; p <= layout.n_pseudomodes; ++p) os << ",p_pm_" << p;
    os << ",p_sink,purity,trace_err\n";

    for (int k = 0; k < ts.sample_count(); ++k) {
        put(os, ts.times(k));
        for (int col = 0; col < layout.dim(); ++col) {
            os << ',';
            put(os, ts.populations(k, col));
        }
        os << ',';
        put(os, ts.purity(k));
        os << ',';
        put(os, ts.trace_error(k));
        os << '\n';
    }
}

void write_timeseries_csv(const TimeSeries& ts, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_timeseries_csv(ts, os);
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace spintrans
