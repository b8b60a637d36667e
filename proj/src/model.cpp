// model.cpp — Specification validation and the single-excitation state layout

#include "spintrans/model.hpp"

#include <sstream>

namespace spintrans {

SystemSpec SystemSpec::uniform(int n_chains, int chain_len, double omega_big0) {
    SystemSpec spec;
    spec.n_chains = n_chains;
    spec.chain_len = chain_len;
    spec.omega_big.assign(static_cast<std::size_t>(n_chains > 0 ? n_chains : 0), omega_big0);
    return spec;
}

SinkSpec SinkSpec::at_end(const SystemSpec& spec, double gamma_sink) {
    return SinkSpec{gamma_sink, spec.chain_len};
}

std::string ValidationReport::joined(const std::string& sep) const {
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) os << sep;
        os << violations[i];
    }
    return os.str();
}

ValidationReport validate_spec(const SystemSpec& spec, const SinkSpec& sink) {
    ValidationReport report;
    auto fail = [&report](const std::string& msg) { report.violations.push_back(msg); };

    if (spec.n_chains < 1) fail("n_chains must be >= 1");
    if (spec.chain_len < 1) fail("chain_len must be >= 1");
    if (spec.r_index < 1 || spec.r_index > spec.chain_len) fail("r_index out of range");
    if (static_cast<int>(spec.omega_big.size()) != spec.n_chains) {
        fail("omega_big length mismatch");
    }
    for (double w : spec.omega_big) {
        if (w < 0.0) {
            fail("omega_big entries must be >= 0");
            break;
        }
    }
    if (sink.gamma_sink < 0.0) fail("gamma_sink must be >= 0");
    if (sink.attach_site < 1 || sink.attach_site > spec.chain_len) {
        fail("attach_site out of range");
    }
    return report;
}

ValidationReport validate_run(const RunConfig& run) {
    ValidationReport report;
    auto fail = [&report](const std::string& msg) { report.violations.push_back(msg); };

    if (!(run.t_final > 0.0)) fail("t_final must be > 0");
    if (run.sample_count < 2) fail("sample_count must be >= 2");
    if (!(run.abs_tol > 0.0 && run.abs_tol < 1.0)) fail("abs_tol must be in (0, 1)");
    if (!(run.rel_tol > 0.0 && run.rel_tol < 1.0)) fail("rel_tol must be in (0, 1)");
    if (run.initial_site < 1) fail("initial_site must be >= 1");
    return report;
}

int StateLayout::site(int chain, int site) const {
    if (chain < 1 || chain > n_chains || site < 1 || site > chain_len) {
        throw std::invalid_argument("StateLayout::site: index out of range");
    }
    return (chain - 1) * chain_len + site;
}

int StateLayout::pseudomode(int mode) const {
    if (mode < 1 || mode > n_pseudomodes) {
        throw std::invalid_argument("StateLayout::pseudomode: index out of range");
    }
    return n_chains * chain_len + mode;
}

StateLayout::Decoded StateLayout::decode(int index) const {
    if (index < 0 || index >= dim()) {
        throw std::invalid_argument("StateLayout::decode: index out of range");
    }
    if (index == 0) return {Kind::Ground};
    if (index <= n_sites()) {
        const int zero_based = index - 1;
        return {Kind::Site, zero_based / chain_len + 1, zero_based % chain_len + 1, 0};
    }
    if (index <= n_sites() + n_pseudomodes) {
        return {Kind::Pseudomode, 0, 0, index - n_sites()};
    }
    return {Kind::Sink};
}

int state_dimension(const SystemSpec& spec, int n_pseudomodes) {
    if (n_pseudomodes < 1) {
        throw std::invalid_argument("state_dimension: n_pseudomodes must be >= 1");
    }
    const ValidationReport report = validate_spec(spec, SinkSpec{0.0, spec.chain_len});
    if (!report.ok()) {
        throw std::invalid_argument("state_dimension: invalid spec: " + report.joined());
    }
    return spec.n_chains * spec.chain_len + n_pseudomodes + 2;
}

}  // namespace spintrans
