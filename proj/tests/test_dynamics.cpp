// Lindblad propagation, the amplitude reduction, and the sampled-bath ground truth.
//
// References are computed test-side: exponential decay and Rabi closed forms, free
// phase evolution in the chain eigenbasis, and agreement between the independent
// propagation routes on small systems.

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "spintrans/dynamics.hpp"

using namespace spintrans;

namespace {

// Full transport scenario at small size: one Lorentzian reservoir plus end sink.
struct Scenario {
    SystemSpec spec;
    PseudomodeModel pm;
    LindbladGenerator gen;
    StateLayout layout;
};

Scenario make_scenario(int n, int m, double omega_big, double gamma_sink) {
    Scenario s;
    s.spec = SystemSpec::uniform(n, m, omega_big);
    s.pm = extract_pseudomodes(SpectralDensity::lorentzian(1.02, 0.2));
    const ExtendedHamiltonian h = build_site_hamiltonian(s.spec, s.pm);
    s.gen = build_generator(h, s.pm, SinkSpec::at_end(s.spec, gamma_sink));
    s.layout = h.layout;
    return s;
}

RunConfig quick_run(double t_final, int samples) {
    RunConfig run;
    run.t_final = t_final;
    run.sample_count = samples;
    return run;
}

}  // namespace

TEST_CASE("generator carries one dissipator per pseudomode plus the sink") {
    const Scenario s = make_scenario(2, 3, 0.15, 0.6);
    REQUIRE(s.gen.dissipators.size() == 2);  // one pseudomode decay + one sink jump

    const PseudomodeModel two = extract_pseudomodes(
        SpectralDensity::sum({{0.5, 0.9, 0.1}, {0.5, 1.1, 0.3}}));
    const SystemSpec spec = SystemSpec::uniform(1, 3, 0.15);
    const ExtendedHamiltonian h = build_site_hamiltonian(spec, two);
    const LindbladGenerator gen = build_generator(h, two, SinkSpec::at_end(spec, 0.6));
    REQUIRE(gen.dissipators.size() == 3);

    // Pseudomode decay rates are the linewidths; the sink jump carries gamma_sink.
    CHECK(gen.dissipators[0].rate == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(gen.dissipators[1].rate == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(gen.dissipators[2].rate == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(gen.gamma_sink == 0.6);
    CHECK(gen.attach_index == h.layout.site(1, 3));

    // Every jump built here moves a single excitation: one unit entry.
    for (const Dissipator& d : gen.dissipators) {
        CHECK(d.source >= 0);
        CHECK(d.target >= 0);
        CHECK(std::abs(d.jump(d.target, d.source) - Complex(1.0, 0.0)) < 1e-15);
        CHECK(d.jump.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("sink channel is kept at rate zero when gamma_sink vanishes") {
    const Scenario s = make_scenario(1, 2, 0.15, 0.0);
    REQUIRE(s.gen.dissipators.size() == 2);
    CHECK(s.gen.dissipators.back().rate == 0.0);
    CHECK(s.gen.attach_index == s.layout.site(1, 2));
}

TEST_CASE("generator rejects mismatched and unusable inputs") {
    const SystemSpec spec = SystemSpec::uniform(1, 3, 0.15);
    const PseudomodeModel one = extract_pseudomodes(SpectralDensity::lorentzian(1.0, 0.2));
    const PseudomodeModel two = extract_pseudomodes(
        SpectralDensity::sum({{0.5, 0.9, 0.1}, {0.5, 1.1, 0.3}}));
    const ExtendedHamiltonian h = build_site_hamiltonian(spec, one);

    CHECK_THROWS_AS((void)build_generator(h, two, SinkSpec::at_end(spec, 0.6)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)build_generator(h, one, SinkSpec{0.6, 9}), std::invalid_argument);
    CHECK_THROWS_AS((void)build_generator(h, one, SinkSpec{-0.1, 3}), std::invalid_argument);

    // The sink jump is site-local, so a sink needs the site basis.
    const ExtendedHamiltonian he = build_eigen_hamiltonian(spec, one);
    CHECK_THROWS_AS((void)build_generator(he, one, SinkSpec::at_end(spec, 0.6)),
                    std::invalid_argument);
    CHECK_NOTHROW((void)build_generator(he, one, SinkSpec::at_end(spec, 0.0)));
}

TEST_CASE("the generator annihilates the stationary states and preserves trace") {
    const Scenario s = make_scenario(1, 2, 0.15, 0.6);
    const int dim = s.layout.dim();

    ExtendedState ground;
    ground.rho = Eigen::MatrixXcd::Zero(dim, dim);
    ground.rho(s.layout.ground(), s.layout.ground()) = 1.0;
    CHECK(apply_generator(s.gen, ground).cwiseAbs().maxCoeff() < 1e-15);

    ExtendedState sink;
    sink.rho = Eigen::MatrixXcd::Zero(dim, dim);
    sink.rho(s.layout.sink(), s.layout.sink()) = 1.0;
    CHECK(apply_generator(s.gen, sink).cwiseAbs().maxCoeff() < 1e-15);

    // Arbitrary Hermitian input: the derivative is traceless and Hermitian.
    Eigen::MatrixXcd a(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            a(r, c) = Complex(std::sin(1.0 + 3.0 * r + c), std::cos(2.0 * r - c));
        }
    }
    ExtendedState mixed;
    mixed.rho = (a * a.adjoint()).eval();
    mixed.rho /= mixed.rho.trace();
    const Eigen::MatrixXcd deriv = apply_generator(s.gen, mixed);
    CHECK(std::abs(deriv.trace()) < 1e-12);
    CHECK((deriv - deriv.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("apply_generator rejects a state of the wrong dimension") {
    const Scenario s = make_scenario(1, 2, 0.15, 0.6);
    ExtendedState bad;
    bad.rho = Eigen::MatrixXcd::Identity(3, 3);
    CHECK_THROWS_AS((void)apply_generator(s.gen, bad), std::invalid_argument);
}

TEST_CASE("decoupled site drains into the sink at exactly gamma_sink") {
    // Omega = 0 and M = 1: pure exponential decay, P_sink = 1 - e^{-0.6 t}.
    const Scenario s = make_scenario(1, 1, 0.0, 0.6);
    const TimeSeries ts =
        integrate(s.gen, initial_site_state(s.layout, 1), quick_run(10.0, 101));
    double worst = 0.0;
    for (int k = 0; k < ts.sample_count(); ++k) {
        const double expected = 1.0 - std::exp(-0.6 * ts.times(k));
        worst = std::max(worst, std::abs(ts.populations(k, s.layout.sink()) - expected));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("lossless resonant mode produces a perfect Rabi cycle") {
    // Site at omega0 = 1 against a lossless mode at the same frequency: the site
    // population is cos^2(Omega t).
    const SystemSpec spec = SystemSpec::uniform(1, 1, 0.15);
    const PseudomodeModel pm = PseudomodeModel::single_mode(1.0, 0.0);
    const ExtendedHamiltonian h = build_site_hamiltonian(spec, pm);
    const LindbladGenerator gen = build_generator(h, pm, SinkSpec::at_end(spec, 0.0));
    const TimeSeries ts =
        integrate(gen, initial_site_state(h.layout, 1), quick_run(30.0, 301));
    double worst = 0.0, purity_dev = 0.0;
    for (int k = 0; k < ts.sample_count(); ++k) {
        const double expected = std::pow(std::cos(0.15 * ts.times(k)), 2);
        worst = std::max(worst, std::abs(ts.populations(k, h.layout.site(1, 1)) - expected));
        purity_dev = std::max(purity_dev, std::abs(ts.purity(k) - 1.0));
    }
    CHECK(worst < 1e-6);
    CHECK(purity_dev < 1e-8);  // unitary case stays pure
}

TEST_CASE("populations are conserved when nothing couples") {
    // Omega = 0, gamma_sink = 0: the chain evolves unitarily under H alone and the
    // diagonal in the eigenbasis is constant; site populations may slosh, the total
    // must not.
    const Scenario s = make_scenario(1, 3, 0.0, 0.0);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(s.layout.dim());
    amps(s.layout.site(1, 1)) = std::sqrt(0.5);
    amps(s.layout.site(1, 2)) = Complex(0.0, std::sqrt(0.3));
    amps(s.layout.site(1, 3)) = std::sqrt(0.2);
    const TimeSeries ts = integrate(s.gen, pure_state(s.layout, amps), quick_run(8.0, 81));
    for (int k = 0; k < ts.sample_count(); ++k) {
        double excited = 0.0;
        for (int l = 1; l <= 3; ++l) excited += ts.populations(k, s.layout.site(1, l));
        CHECK(excited == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(ts.populations(k, s.layout.sink()) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sink and ground populations never decrease") {
    const Scenario s = make_scenario(2, 3, 0.15, 0.6);
    const TimeSeries ts =
        integrate(s.gen, initial_site_state(s.layout, 1), quick_run(40.0, 201));
    for (int k = 1; k < ts.sample_count(); ++k) {
        CHECK(ts.populations(k, s.layout.sink()) >=
              ts.populations(k - 1, s.layout.sink()) - 1e-10);
        CHECK(ts.populations(k, s.layout.ground()) >=
              ts.populations(k - 1, s.layout.ground()) - 1e-10);
    }
    // Bookkeeping: every sampled population row sums to one.
    for (int k = 0; k < ts.sample_count(); ++k) {
        CHECK(ts.populations.row(k).sum() == doctest::Approx(1.0).epsilon(1e-9));
    }
    // Diagnostics stay within the declared state invariants.
    CHECK(ts.trace_error.maxCoeff() < 1e-9);
    CHECK(ts.hermiticity_error.maxCoeff() < 1e-9);
    CHECK(ts.min_eigenvalue.minCoeff() > -1e-7);
}

TEST_CASE("initial states are validated") {
    const Scenario s = make_scenario(1, 3, 0.15, 0.6);
    CHECK_THROWS_AS((void)initial_site_state(s.layout, 4), std::invalid_argument);
    CHECK_THROWS_AS((void)pure_state(s.layout, Eigen::VectorXcd::Zero(s.layout.dim())),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)pure_state(s.layout, Eigen::VectorXcd::Ones(3)),
                    std::invalid_argument);

    // Non-normalized amplitudes are normalized on entry.
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(s.layout.dim());
    amps(s.layout.site(1, 2)) = 2.0;
    const ExtendedState rho = pure_state(s.layout, amps);
    CHECK(std::abs(rho.rho.trace() - Complex(1.0, 0.0)) < 1e-14);
}

TEST_CASE("fixed-step cross-check matches the adaptive integrator") {
    const Scenario s = make_scenario(1, 3, 0.15, 0.6);
    const ExtendedState rho0 = initial_site_state(s.layout, 1);
    const RunConfig run = quick_run(10.0, 51);
    const TimeSeries adaptive = integrate(s.gen, rho0, run);
    const TimeSeries fixed = integrate_fixed_rk4(s.gen, rho0, run, 400);
    CHECK((adaptive.populations - fixed.populations).cwiseAbs().maxCoeff() < 1e-7);
    CHECK_THROWS_AS((void)integrate_fixed_rk4(s.gen, rho0, run, 0), std::invalid_argument);
}

TEST_CASE("a run that blows past the state invariants aborts") {
    // Absurdly loose tolerances let the controller accept garbage steps; the
    // invariant monitor must refuse to report such a state.
    const Scenario s = make_scenario(1, 3, 0.15, 0.6);
    RunConfig run = quick_run(300.0, 3);
    run.abs_tol = 0.9;
    run.rel_tol = 0.9;
    CHECK_THROWS_AS((void)integrate(s.gen, initial_site_state(s.layout, 1), run),
                    invariant_error);
}

TEST_CASE("free amplitude evolution picks up exactly the eigenmode phases") {
    const SystemSpec spec = SystemSpec::uniform(1, 3, 0.0);
    const PseudomodeModel pm = extract_pseudomodes(SpectralDensity::lorentzian(1.02, 0.2));
    const AmplitudeState a0 = initial_site_amplitudes(spec, 1);

    const EigenBasis basis = build_eigenbasis(3, spec.omega0, spec.j_coupling);
    REQUIRE(a0.chain.size() == 3);
    for (int l = 0; l < 3; ++l) {
        CHECK(std::abs(a0.chain(l) - Complex(basis.u(l, 0), 0.0)) < 1e-14);
    }

    const double t = 7.0;
    const AmplitudeState at = evolve_amplitudes(spec, pm, a0, t);
    for (int l = 0; l < 3; ++l) {
        const Complex expected =
            a0.chain(l) * std::exp(Complex(0.0, -basis.energies(l) * t));
        CHECK(std::abs(at.chain(l) - expected) < 1e-9);
    }
    CHECK(at.pseudomodes.cwiseAbs().maxCoeff() < 1e-12);  // nothing feeds the modes
    CHECK(std::abs(at.ground - a0.ground) < 1e-15);
}

TEST_CASE("amplitude route reproduces the Lindblad populations without a sink") {
    SystemSpec spec = SystemSpec::uniform(2, 2, 0.15);
    spec.omega_big = {0.15, 0.08};
    const PseudomodeModel pm = extract_pseudomodes(
        SpectralDensity::sum({{0.5, 0.9, 0.1}, {0.5, 1.1, 0.3}}));
    const RunConfig run = quick_run(12.0, 61);

    const ExtendedHamiltonian h = build_site_hamiltonian(spec, pm);
    const LindbladGenerator gen = build_generator(h, pm, SinkSpec::at_end(spec, 0.0));
    RunConfig tight = run;
    tight.abs_tol = 1e-12;
    tight.rel_tol = 1e-12;
    const TimeSeries dense = integrate(gen, initial_site_state(h.layout, 1), tight);
    const TimeSeries amp =
        integrate_amplitudes(spec, pm, initial_site_amplitudes(spec, 1), tight);

    REQUIRE(amp.populations.cols() == dense.populations.cols());
    CHECK((dense.populations - amp.populations).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((dense.purity - amp.purity).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("amplitude route refuses an active sink") {
    const SystemSpec spec = SystemSpec::uniform(1, 2, 0.15);
    const PseudomodeModel pm = extract_pseudomodes(SpectralDensity::lorentzian(1.0, 0.2));
    const SinkSpec sink{0.6, 2};
    CHECK_THROWS_AS((void)integrate_amplitudes(spec, pm, initial_site_amplitudes(spec, 1),
                                               quick_run(5.0, 11), &sink),
                    std::invalid_argument);
}

TEST_CASE("lossless amplitude evolution conserves the excited norm") {
    const SystemSpec spec = SystemSpec::uniform(1, 2, 0.15);
    const PseudomodeModel pm = PseudomodeModel::single_mode(1.05, 0.0);
    AmplitudeState a0 = initial_site_amplitudes(spec, 1);
    a0.chain *= 0.8;
    a0.ground = 0.6;
    const double norm0 = a0.chain.squaredNorm();
    for (double t : {3.0, 9.0, 15.0}) {
        const AmplitudeState at = evolve_amplitudes(spec, pm, a0, t);
        const double norm = at.chain.squaredNorm() + at.pseudomodes.squaredNorm();
        CHECK(norm == doctest::Approx(norm0).epsilon(1e-8));
        CHECK(std::abs(at.ground - a0.ground) < 1e-12);
    }
}

TEST_CASE("bath discretization covers the line and weights the density") {
    const SpectralDensity sd = SpectralDensity::lorentzian(1.0, 0.2);
    const DiscretizedBath bath = discretize_bath(sd, 2000);
    REQUIRE(bath.frequencies.size() == 2000);
    REQUIRE(bath.weights.size() == 2000);

    // Window [1 - 8, 1 + 8]: midpoints start half a step inside.
    const double delta = 16.0 / 2000;
    CHECK(bath.frequencies(0) == doctest::Approx(-7.0 + delta / 2.0).epsilon(1e-12));
    CHECK(bath.frequencies(1999) == doctest::Approx(9.0 - delta / 2.0).epsilon(1e-12));
    CHECK(bath.weights.minCoeff() > 0.0);

    // Captured weight approaches the closed-form window coverage (2/pi) atan(80).
    const double coverage = 2.0 / std::numbers::pi * std::atan(80.0);
    CHECK(bath.captured_weight == doctest::Approx(coverage).epsilon(1e-4));
    CHECK(bath.captured_weight > 0.99);
}

TEST_CASE("bath discretization rejects windows that miss too much weight") {
    const SpectralDensity sd = SpectralDensity::lorentzian(1.0, 0.2);
    // (2/pi) atan(2*10) = 0.968 < 0.99: too narrow.
    CHECK_THROWS_WITH_AS((void)discretize_bath(sd, 500, 10.0),
                         doctest::Contains("window"), std::invalid_argument);
    CHECK_THROWS_AS((void)discretize_bath(sd, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)discretize_bath(sd, 500, 0.0), std::invalid_argument);
}

TEST_CASE("sampled-bath evolution requires a usable mode count and no drive is inert") {
    const SystemSpec spec = SystemSpec::uniform(1, 2, 0.0);
    const SpectralDensity sd = SpectralDensity::lorentzian(1.0, 0.2);
    CHECK_THROWS_AS(
        (void)integrate_discretized_bath(spec, sd, 50, quick_run(1.0, 11)),
        std::invalid_argument);

    const TimeSeries ts = integrate_discretized_bath(spec, sd, 200, quick_run(5.0, 21));
    const StateLayout lay{1, 2, 1};
    for (int k = 0; k < ts.sample_count(); ++k) {
        // Site populations stay frozen without a system-bath coupling.
        const double p1 = ts.populations(k, lay.site(1, 1));
        const double p2 = ts.populations(k, lay.site(1, 2));
        CHECK(p1 + p2 == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(ts.populations(k, lay.pseudomode(1)) ==
              doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sampled bath reproduces the reduced dynamics of a single site") {
    const SystemSpec spec = SystemSpec::uniform(1, 1, 0.15);
    const SpectralDensity sd = SpectralDensity::lorentzian(1.0, 0.2);
    const RunConfig run = quick_run(10.0, 51);

    const PseudomodeModel pm = extract_pseudomodes(sd);
    const ExtendedHamiltonian h = build_site_hamiltonian(spec, pm);
    const LindbladGenerator gen = build_generator(h, pm, SinkSpec::at_end(spec, 0.0));
    const TimeSeries reduced = integrate(gen, initial_site_state(h.layout, 1), run);
    const TimeSeries bath = integrate_discretized_bath(spec, sd, 600, run);

    double worst = 0.0;
    for (int k = 0; k < run.sample_count; ++k) {
        worst = std::max(worst, std::abs(reduced.populations(k, 1) - bath.populations(k, 1)));
    }
    CHECK(worst < 1e-2);
}
