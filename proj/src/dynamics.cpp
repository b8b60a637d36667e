// dynamics.cpp — Lindblad integration, amplitude ODEs, and the discretized-bath oracle

#include "spintrans/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "spintrans/ode.hpp"

namespace spintrans {
namespace {

constexpr Complex kMinusI{0.0, -1.0};

// ExtendedState invariant tolerances; integration aborts at 10x these.
constexpr double kTraceTol = 1e-9;
constexpr double kHermTol = 1e-9;
constexpr double kEigFloor = -1e-7;

void require_valid_run(const RunConfig& run) {
    const ValidationReport report = validate_run(run);
    if (!report.ok()) {
        throw std::invalid_argument("invalid run config: " + report.joined());
    }
}

void require_valid_spec(const SystemSpec& spec) {
    const ValidationReport report = validate_spec(spec, SinkSpec{0.0, spec.chain_len});
    if (!report.ok()) {
        throw std::invalid_argument("invalid system spec: " + report.joined());
    }
}

TimeSeries make_series(const StateLayout& layout, const RunConfig& run, double gamma_sink,
                       int attach_index) {
    TimeSeries ts;
    ts.layout = layout;
    ts.times = Eigen::VectorXd::LinSpaced(run.sample_count, 0.0, run.t_final);
    ts.populations.setZero(run.sample_count, layout.dim());
    ts.purity.setZero(run.sample_count);
    ts.trace_error.setZero(run.sample_count);
    ts.min_eigenvalue.setZero(run.sample_count);
    ts.hermiticity_error.setZero(run.sample_count);
    ts.gamma_sink = gamma_sink;
    ts.attach_index = attach_index;
    return ts;
}

Eigen::MatrixXcd lindblad_rhs(const LindbladGenerator& gen, const Eigen::MatrixXcd& rho) {
    // -i[H, rho] for Hermitian rho, written as -i(HR - HR^dag) so the output is
    // exactly Hermitian and its trace cancels to roundoff.
    const Eigen::MatrixXcd h_rho = gen.hamiltonian.matrix * rho;
    Eigen::MatrixXcd out = kMinusI * (h_rho - h_rho.adjoint());
    for (const Dissipator& d : gen.dissipators) {
        if (d.rate == 0.0) continue;
        if (d.source >= 0 && d.target >= 0) {
            // jump = |target><source|: L rho L^dag feeds one diagonal entry and the
            // anticommutator damps the source row and column.
            out(d.target, d.target) += d.rate * rho(d.source, d.source);
            out.row(d.source) -= (0.5 * d.rate) * rho.row(d.source);
            out.col(d.source) -= (0.5 * d.rate) * rho.col(d.source);
        } else {
            out += d.rate * (d.jump * rho * d.jump.adjoint());
            out -= (0.5 * d.rate) * (d.jdag_j * rho + rho * d.jdag_j);
        }
    }
    return out;
}

Dissipator single_transfer(int dim, int target, int source, double rate) {
    Dissipator d;
    d.rate = rate;
    d.jump = Eigen::MatrixXcd::Zero(dim, dim);
    d.jump(target, source) = 1.0;
    d.jdag_j = Eigen::MatrixXcd::Zero(dim, dim);
    d.jdag_j(source, source) = 1.0;
    d.source = source;
    d.target = target;
    return d;
}

void record_density_sample(TimeSeries& ts, int k, const Eigen::MatrixXcd& rho) {
    ts.populations.row(k) = rho.diagonal().real();
    ts.purity(k) = rho.squaredNorm();  // Tr(rho^2) for Hermitian rho
    ts.trace_error(k) = std::abs(rho.trace() - Complex{1.0, 0.0});
    ts.hermiticity_error(k) = (rho - rho.adjoint().eval()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    ts.min_eigenvalue(k) = es.eigenvalues().minCoeff();
}

void check_density_sample(const TimeSeries& ts, int k) {
    std::ostringstream why;
    if (!std::isfinite(ts.trace_error(k)) || !std::isfinite(ts.hermiticity_error(k)) ||
        !std::isfinite(ts.min_eigenvalue(k))) {
        why << "state is non-finite";
    } else if (ts.trace_error(k) > 10.0 * kTraceTol) {
        why << "trace error " << ts.trace_error(k) << " exceeds " << 10.0 * kTraceTol;
    } else if (ts.hermiticity_error(k) > 10.0 * kHermTol) {
        why << "hermiticity error " << ts.hermiticity_error(k) << " exceeds "
            << 10.0 * kHermTol;
    } else if (ts.min_eigenvalue(k) < 10.0 * kEigFloor) {
        why << "smallest eigenvalue " << ts.min_eigenvalue(k) << " below "
            << 10.0 * kEigFloor;
    } else {
        return;
    }
    std::ostringstream msg;
    msg << "state invariant violated at t = " << ts.times(k) << ": " << why.str();
    throw invariant_error(msg.str());
}

// Shared skeleton for the two density-matrix drivers: propagate segment-by-segment
// with `step`, re-symmetrizing and validating at every sample.
template <class Step>
TimeSeries propagate_density(const LindbladGenerator& gen, const ExtendedState& rho0,
                             const RunConfig& run, Step&& step) {
    require_valid_run(run);
    const StateLayout& layout = gen.hamiltonian.layout;
    if (rho0.rho.rows() != layout.dim() || rho0.rho.cols() != layout.dim()) {
        throw std::invalid_argument("initial state dimension mismatch");
    }

    TimeSeries ts = make_series(layout, run, gen.gamma_sink, gen.attach_index);
    Eigen::MatrixXcd rho = rho0.rho;
    record_density_sample(ts, 0, rho);
    check_density_sample(ts, 0);
    for (int k = 1; k < run.sample_count; ++k) {
        step(rho, ts.times(k - 1), ts.times(k));
        rho = (0.5 * (rho + rho.adjoint())).eval();
        record_density_sample(ts, k, rho);
        check_density_sample(ts, k);
    }
    return ts;
}

}  // namespace

ExtendedState initial_site_state(const StateLayout& layout, int site) {
    Eigen::VectorXcd amplitudes = Eigen::VectorXcd::Zero(layout.dim());
    amplitudes(layout.site(1, site)) = 1.0;
    return pure_state(layout, amplitudes);
}

ExtendedState pure_state(const StateLayout& layout, const Eigen::VectorXcd& amplitudes) {
    if (amplitudes.size() != layout.dim()) {
        throw std::invalid_argument("pure_state: amplitude dimension mismatch");
    }
    const double norm = amplitudes.norm();
    if (!(norm > 0.0)) {
        throw std::invalid_argument("pure_state: zero state");
    }
    const Eigen::VectorXcd psi = amplitudes / norm;
    return ExtendedState{psi * psi.adjoint(), 0.0};
}

LindbladGenerator build_generator(const ExtendedHamiltonian& h, const PseudomodeModel& pm,
                                  const SinkSpec& sink) {
    const StateLayout& layout = h.layout;
    if (layout.n_pseudomodes != pm.size()) {
        throw std::invalid_argument("build_generator: pseudomode count mismatch");
    }
    if (sink.gamma_sink < 0.0) {
        throw std::invalid_argument("build_generator: gamma_sink must be >= 0");
    }
    if (sink.attach_site < 1 || sink.attach_site > layout.chain_len) {
        throw std::invalid_argument("build_generator: attach_site out of range");
    }
    if (h.basis != Basis::Site && sink.gamma_sink != 0.0) {
        throw std::invalid_argument(
            "build_generator: the sink jump is site-local; pass a site-basis Hamiltonian");
    }

    LindbladGenerator gen;
    gen.hamiltonian = h;
    for (int m = 0; m < pm.size(); ++m) {
        const double rate = pm.decay_rate(m);
        if (rate < 0.0) {
            throw std::invalid_argument("build_generator: pseudomode must decay (Im z <= 0)");
        }
        gen.dissipators.push_back(
            single_transfer(layout.dim(), layout.ground(), layout.pseudomode(m + 1), rate));
    }
    const int attach = layout.site(1, sink.attach_site);
    gen.dissipators.push_back(
        single_transfer(layout.dim(), layout.sink(), attach, sink.gamma_sink));
    gen.gamma_sink = sink.gamma_sink;
    gen.attach_index = attach;
    return gen;
}

Eigen::MatrixXcd apply_generator(const LindbladGenerator& gen, const ExtendedState& state) {
    const int dim = gen.hamiltonian.layout.dim();
    if (state.rho.rows() != dim || state.rho.cols() != dim) {
        throw std::invalid_argument("apply_generator: dimension mismatch");
    }
    return lindblad_rhs(gen, state.rho);
}

TimeSeries integrate(const LindbladGenerator& gen, const ExtendedState& rho0,
                     const RunConfig& run) {
    const ode::Options opt{run.abs_tol, run.rel_tol};
    double h = 0.0;
    auto rhs = [&gen](double, const Eigen::MatrixXcd& rho) { return lindblad_rhs(gen, rho); };
    auto resym = [](Eigen::MatrixXcd& rho, double) {
        rho = (0.5 * (rho + rho.adjoint())).eval();
    };
    return propagate_density(gen, rho0, run,
                             [&](Eigen::MatrixXcd& rho, double t0, double t1) {
                                 ode::advance(rhs, rho, t0, t1, h, opt, resym);
                             });
}

TimeSeries integrate_fixed_rk4(const LindbladGenerator& gen, const ExtendedState& rho0,
                               const RunConfig& run, int substeps_per_sample) {
    if (substeps_per_sample < 1) {
        throw std::invalid_argument("integrate_fixed_rk4: substeps_per_sample must be >= 1");
    }
    auto rhs = [&gen](double, const Eigen::MatrixXcd& rho) { return lindblad_rhs(gen, rho); };
    return propagate_density(gen, rho0, run,
                             [&](Eigen::MatrixXcd& rho, double t0, double t1) {
                                 ode::rk4(rhs, rho, t0, t1, substeps_per_sample);
                             });
}

AmplitudeState initial_site_amplitudes(const SystemSpec& spec, int site) {
    require_valid_spec(spec);
    if (site < 1 || site > spec.chain_len) {
        throw std::invalid_argument("initial_site_amplitudes: site out of range");
    }
    const EigenBasis basis = build_eigenbasis(spec.chain_len, spec.omega0, spec.j_coupling);
    AmplitudeState a;
    a.chain = Eigen::VectorXcd::Zero(spec.n_chains * spec.chain_len);
    for (int l = 1; l <= spec.chain_len; ++l) {
        a.chain(l - 1) = basis.u(l - 1, site - 1);  // chain 1, eigenmode l
    }
    return a;
}

namespace {

// Flat amplitude vector: N*M chain-eigenmode entries then P pseudomode entries.
struct AmplitudeSystem {
    SystemSpec spec;
    EigenBasis basis;
    Eigen::VectorXcd minus_i_energy;    // -i E_l over the chain part
    Eigen::VectorXcd minus_i_z;         // -i z_m over the pseudomode part
    Eigen::VectorXcd coupling_factors;  // sqrt(-i r_m)
    int n_chain{0};
    int n_modes{0};

    Eigen::VectorXcd rhs(const Eigen::VectorXcd& y) const {
        Eigen::VectorXcd dy(y.size());
        dy.head(n_chain) = minus_i_energy.cwiseProduct(y.head(n_chain));
        dy.tail(n_modes) = minus_i_z.cwiseProduct(y.tail(n_modes));
        // Only eigenmode r of each chain couples: i dc_r = ... + Omega_j sum_m cf_m s_m,
        // i ds_m = ... + conj(cf_m) sum_j Omega_j c_{jr}.
        const Complex t = coupling_factors.cwiseProduct(y.tail(n_modes)).sum();
        Complex bright{0.0, 0.0};
        for (int j = 0; j < spec.n_chains; ++j) {
            const int idx = j * spec.chain_len + spec.r_index - 1;
            const double omega_big = spec.omega_big[static_cast<std::size_t>(j)];
            dy(idx) += kMinusI * omega_big * t;
            bright += omega_big * y(idx);
        }
        dy.tail(n_modes) += kMinusI * bright * coupling_factors.conjugate();
        return dy;
    }
};

AmplitudeSystem make_amplitude_system(const SystemSpec& spec, const PseudomodeModel& pm) {
    require_valid_spec(spec);
    if (pm.size() < 1) {
        throw std::invalid_argument("amplitude system: at least one pseudomode required");
    }
    AmplitudeSystem sys;
    sys.spec = spec;
    sys.basis = build_eigenbasis(spec.chain_len, spec.omega0, spec.j_coupling);
    sys.n_chain = spec.n_chains * spec.chain_len;
    sys.n_modes = pm.size();
    sys.minus_i_energy.resize(sys.n_chain);
    for (int j = 0; j < spec.n_chains; ++j) {
        for (int l = 0; l < spec.chain_len; ++l) {
            sys.minus_i_energy(j * spec.chain_len + l) = kMinusI * sys.basis.energies(l);
        }
    }
    sys.minus_i_z.resize(sys.n_modes);
    sys.coupling_factors.resize(sys.n_modes);
    for (int m = 0; m < sys.n_modes; ++m) {
        sys.minus_i_z(m) = kMinusI * pm.modes[static_cast<std::size_t>(m)].z;
        sys.coupling_factors(m) = pm.modes[static_cast<std::size_t>(m)].coupling_factor;
    }
    return sys;
}

Eigen::VectorXcd pack_amplitudes(const AmplitudeSystem& sys, const AmplitudeState& a0) {
    if (a0.chain.size() != sys.n_chain) {
        throw std::invalid_argument("amplitude state: chain length mismatch");
    }
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(sys.n_chain + sys.n_modes);
    y.head(sys.n_chain) = a0.chain;
    if (a0.pseudomodes.size() != 0) {
        if (a0.pseudomodes.size() != sys.n_modes) {
            throw std::invalid_argument("amplitude state: pseudomode count mismatch");
        }
        y.tail(sys.n_modes) = a0.pseudomodes;
    }
    return y;
}

// Populations and purity of the density matrix a pure-amplitude trajectory implies:
// rho = |phi><phi| + (1 - |c0|^2 - |psi|^2)|0><0| with the ground coherence c0 psi^dag.
void record_amplitude_sample(TimeSeries& ts, int k, const AmplitudeSystem& sys,
                             const Eigen::VectorXcd& y, Complex ground) {
    const StateLayout& layout = ts.layout;
    const int m = sys.spec.chain_len;
    for (int j = 0; j < sys.spec.n_chains; ++j) {
        const Eigen::VectorXcd site_amps =
            sys.basis.u.transpose().cast<Complex>() * y.segment(j * m, m);
        for (int l = 1; l <= m; ++l) {
            ts.populations(k, layout.site(j + 1, l)) = std::norm(site_amps(l - 1));
        }
    }
    for (int p = 1; p <= sys.n_modes; ++p) {
        ts.populations(k, layout.pseudomode(p)) = std::norm(y(sys.n_chain + p - 1));
    }
    const double excited = y.squaredNorm();
    const double ground_pop = std::norm(ground);
    const double p_gg = 1.0 - excited;  // initial ground weight plus the decayed part
    ts.populations(k, layout.ground()) = p_gg;
    ts.purity(k) = p_gg * p_gg + excited * excited + 2.0 * ground_pop * excited;
    ts.trace_error(k) = 0.0;
    ts.hermiticity_error(k) = 0.0;
    // Nonzero eigenvalues live in span{|0>, |psi>}: report the smaller root.
    const double disc = std::sqrt((p_gg - excited) * (p_gg - excited) +
                                  4.0 * ground_pop * excited);
    ts.min_eigenvalue(k) = std::min(0.0, 0.5 * ((p_gg + excited) - disc));
}

}  // namespace

TimeSeries integrate_amplitudes(const SystemSpec& spec, const PseudomodeModel& pm,
                                const AmplitudeState& a0, const RunConfig& run,
                                const SinkSpec* sink) {
    if (sink != nullptr && sink->gamma_sink != 0.0) {
        throw std::invalid_argument(
            "integrate_amplitudes: the amplitude picture has no sink channel");
    }
    require_valid_run(run);
    const AmplitudeSystem sys = make_amplitude_system(spec, pm);
    Eigen::VectorXcd y = pack_amplitudes(sys, a0);

    const StateLayout layout{spec.n_chains, spec.chain_len, sys.n_modes};
    TimeSeries ts = make_series(layout, run, 0.0, -1);
    record_amplitude_sample(ts, 0, sys, y, a0.ground);

    const ode::Options opt{run.abs_tol, run.rel_tol};
    double h = 0.0;
    auto rhs = [&sys](double, const Eigen::VectorXcd& v) { return sys.rhs(v); };
    for (int k = 1; k < run.sample_count; ++k) {
        ode::advance(rhs, y, ts.times(k - 1), ts.times(k), h, opt,
                     [](Eigen::VectorXcd&, double) {});
        record_amplitude_sample(ts, k, sys, y, a0.ground);
    }
    return ts;
}

AmplitudeState evolve_amplitudes(const SystemSpec& spec, const PseudomodeModel& pm,
                                 const AmplitudeState& a0, double t, double abs_tol,
                                 double rel_tol) {
    if (t < 0.0) throw std::invalid_argument("evolve_amplitudes: t must be >= 0");
    const AmplitudeSystem sys = make_amplitude_system(spec, pm);
    Eigen::VectorXcd y = pack_amplitudes(sys, a0);
    const ode::Options opt{abs_tol, rel_tol};
    double h = 0.0;
    auto rhs = [&sys](double, const Eigen::VectorXcd& v) { return sys.rhs(v); };
    ode::advance(rhs, y, 0.0, t, h, opt, [](Eigen::VectorXcd&, double) {});

    AmplitudeState out;
    out.chain = y.head(sys.n_chain);
    out.pseudomodes = y.tail(sys.n_modes);
    out.ground = a0.ground;
    return out;
}

DiscretizedBath discretize_bath(const SpectralDensity& sd, int bath_modes,
                                double window_widths) {
    if (bath_modes < 1) {
        throw std::invalid_argument("discretize_bath: bath_modes must be >= 1");
    }
    if (sd.terms.empty()) {
        throw std::invalid_argument("discretize_bath: empty spectral density");
    }
    if (!(window_widths > 0.0)) {
        throw std::invalid_argument("discretize_bath: window_widths must be > 0");
    }
    double gamma_max = 0.0, center_lo = 0.0, center_hi = 0.0;
    for (std::size_t i = 0; i < sd.terms.size(); ++i) {
        gamma_max = std::max(gamma_max, sd.terms[i].gamma);
        center_lo = (i == 0) ? sd.terms[i].omega_c : std::min(center_lo, sd.terms[i].omega_c);
        center_hi = (i == 0) ? sd.terms[i].omega_c : std::max(center_hi, sd.terms[i].omega_c);
    }
    const double width = window_widths * gamma_max;
    const double lo = center_lo - width;
    const double hi = center_hi + width;

    // Closed-form window coverage: per term, arctan profile of the Lorentzian CDF.
    double covered = 0.0;
    for (const LorentzianTerm& t : sd.terms) {
        covered += t.weight / std::numbers::pi *
                   (std::atan(2.0 * (hi - t.omega_c) / t.gamma) -
                    std::atan(2.0 * (lo - t.omega_c) / t.gamma));
    }
    if (covered < 0.99) {
        std::ostringstream msg;
        msg << "discretize_bath: window too narrow, captures " << covered
            << " of the spectral weight (< 0.99)";
        throw std::invalid_argument(msg.str());
    }

    DiscretizedBath bath;
    const double delta = (hi - lo) / bath_modes;
    bath.frequencies.resize(bath_modes);
    bath.weights.resize(bath_modes);
    for (int k = 0; k < bath_modes; ++k) {
        const double omega = lo + (k + 0.5) * delta;  // midpoint rule
        bath.frequencies(k) = omega;
        bath.weights(k) = evaluate_density(sd, omega) * delta / (2.0 * std::numbers::pi);
    }
    bath.captured_weight = bath.weights.sum();
    return bath;
}

TimeSeries integrate_discretized_bath(const SystemSpec& spec, const SpectralDensity& sd,
                                      int bath_modes, const RunConfig& run,
                                      double window_widths) {
    if (bath_modes < 100) {
        throw std::invalid_argument("integrate_discretized_bath: bath_modes must be >= 100");
    }
    require_valid_spec(spec);
    require_valid_run(run);
    const DiscretizedBath bath = discretize_bath(sd, bath_modes, window_widths);
    const EigenBasis basis = build_eigenbasis(spec.chain_len, spec.omega0, spec.j_coupling);
    const int n_chain = spec.n_chains * spec.chain_len;

    // State [c (chain eigenmodes), b (bath modes)]; every chain shares the bath
    // in phase: g_{j lambda} = Omega_j * sqrt(weight_lambda).
    Eigen::VectorXcd minus_i_energy(n_chain);
    for (int j = 0; j < spec.n_chains; ++j) {
        for (int l = 0; l < spec.chain_len; ++l) {
            minus_i_energy(j * spec.chain_len + l) = kMinusI * basis.energies(l);
        }
    }
    const Eigen::VectorXcd minus_i_omega = kMinusI * bath.frequencies.cast<Complex>();
    const Eigen::VectorXcd root_weights = bath.weights.cwiseSqrt().cast<Complex>();

    auto rhs = [&](double, const Eigen::VectorXcd& y) {
        Eigen::VectorXcd dy(y.size());
        dy.head(n_chain) = minus_i_energy.cwiseProduct(y.head(n_chain));
        dy.tail(bath_modes) = minus_i_omega.cwiseProduct(y.tail(bath_modes));
        const Complex t = root_weights.dot(y.tail(bath_modes));  // sum_l sqrt(w_l) b_l
        Complex bright{0.0, 0.0};
        for (int j = 0; j < spec.n_chains; ++j) {
            const int idx = j * spec.chain_len + spec.r_index - 1;
            const double omega_big = spec.omega_big[static_cast<std::size_t>(j)];
            dy(idx) += kMinusI * omega_big * t;
            bright += omega_big * y(idx);
        }
        dy.tail(bath_modes) += kMinusI * bright * root_weights;
        return dy;
    };

    const AmplitudeState a0 = initial_site_amplitudes(spec, run.initial_site);
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n_chain + bath_modes);
    y.head(n_chain) = a0.chain;

    // One aggregate reservoir column stands in for the pseudomode slot.
    const StateLayout layout{spec.n_chains, spec.chain_len, 1};
    TimeSeries ts = make_series(layout, run, 0.0, -1);

    auto record = [&](int k) {
        const int m = spec.chain_len;
        for (int j = 0; j < spec.n_chains; ++j) {
            const Eigen::VectorXcd site_amps =
                basis.u.transpose().cast<Complex>() * y.segment(j * m, m);
            for (int l = 1; l <= m; ++l) {
                ts.populations(k, layout.site(j + 1, l)) = std::norm(site_amps(l - 1));
            }
        }
        ts.populations(k, layout.pseudomode(1)) = y.tail(bath_modes).squaredNorm();
        ts.populations(k, layout.ground()) =
            1.0 - ts.populations.row(k).segment(1, layout.dim() - 2).sum();
        ts.purity(k) = 1.0;  // closed unitary evolution of a pure state
        ts.trace_error(k) = 0.0;
    };

    const ode::Options opt{run.abs_tol, run.rel_tol};
    double h = 0.0;
    // Renormalize after every accepted step: the evolution is unitary, so this only
    // removes integrator norm drift.
    auto renorm = [](Eigen::VectorXcd& v, double) { v /= v.norm(); };
    record(0);
    for (int k = 1; k < run.sample_count; ++k) {
        ode::advance(rhs, y, ts.times(k - 1), ts.times(k), h, opt, renorm);
        record(k);
    }
    return ts;
}

}  // namespace spintrans
