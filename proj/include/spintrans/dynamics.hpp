// dynamics.hpp — Three propagation routes for the extended system:
//   integrate            Lindblad density-matrix evolution (production path)
//   integrate_amplitudes single-excitation amplitude ODEs (validation, no sink)
//   integrate_discretized_bath  brute-force Schrodinger evolution against a sampled
//                        reservoir (ground truth for the pseudomode reduction)

#pragma once

#include <Eigen/Dense>

#include <vector>

#include "spintrans/hamiltonian.hpp"
#include "spintrans/model.hpp"
#include "spintrans/spectral.hpp"
#include "spintrans/timeseries.hpp"

namespace spintrans {

// Density matrix over the StateLayout. Invariants: Hermitian and unit trace within
// 1e-9, smallest eigenvalue >= -1e-7.
struct ExtendedState {
    Eigen::MatrixXcd rho;
    double time{0.0};
};

ExtendedState initial_site_state(const StateLayout& layout, int site);
ExtendedState pure_state(const StateLayout& layout, const Eigen::VectorXcd& amplitudes);

// One Lindblad jump channel. `source`/`target` cache the single-transfer structure
// (jump = |target><source|) that every generator built here produces; -1 marks a
// general dense jump, applied through `jump` and the precomputed `jdag_j`.
struct Dissipator {
    double rate{0.0};
    Eigen::MatrixXcd jump;
    Eigen::MatrixXcd jdag_j;  // jump^dagger * jump
    int source{-1};
    int target{-1};
};

struct LindbladGenerator {
    ExtendedHamiltonian hamiltonian;
    std::vector<Dissipator> dissipators;

    // Sink parameters carried into the TimeSeries.
    double gamma_sink{0.0};
    int attach_index{-1};
};

// One dissipator per pseudomode at rate -2*Im(z_l) plus the sink jump from site
// attach_site of chain 1. Requires a site-basis Hamiltonian: the sink operator is
// site-local.
LindbladGenerator build_generator(const ExtendedHamiltonian& h, const PseudomodeModel& pm,
                                  const SinkSpec& sink);

// Right-hand side -i[H,rho] + sum_k rate_k (L rho L^dag - {L^dag L, rho}/2).
// Hermitian and traceless for Hermitian input.
Eigen::MatrixXcd apply_generator(const LindbladGenerator& gen, const ExtendedState& state);

// Adaptive embedded Runge-Kutta propagation sampled at sample_count uniform times in
// [0, t_final]. Re-symmetrizes after every accepted step; aborts with invariant_error
// if a sampled state violates the ExtendedState invariants beyond 10x tolerance.
TimeSeries integrate(const LindbladGenerator& gen, const ExtendedState& rho0,
                     const RunConfig& run);

// Fixed-step fourth-order fallback for cross-checking the adaptive path.
TimeSeries integrate_fixed_rk4(const LindbladGenerator& gen, const ExtendedState& rho0,
                               const RunConfig& run, int substeps_per_sample);

// Wavefunction over chain eigenmodes and pseudomodes:
//   i dc_{jl}/dt = E_l c_{jl} + delta_{l,r} sum_m g_{jm} s_m
//   i ds_m/dt    = z_m s_m    + sum_j g_{jm} c_{jr}
// The ground amplitude is a constant of motion.
struct AmplitudeState {
    Eigen::VectorXcd chain;        // N*M eigenmode amplitudes, (j-1)*M + l - 1
    Eigen::VectorXcd pseudomodes;  // one per mode
    Complex ground{0.0};
};

AmplitudeState initial_site_amplitudes(const SystemSpec& spec, int site);

// No-sink evolution of the amplitudes; populations match the Lindblad excited-sector
// diagonals. Passing a sink with gamma_sink != 0 is an error: the amplitude picture
// has no sink channel.
TimeSeries integrate_amplitudes(const SystemSpec& spec, const PseudomodeModel& pm,
                                const AmplitudeState& a0, const RunConfig& run,
                                const SinkSpec* sink = nullptr);

// End state of the same evolution, for amplitude-level checks.
AmplitudeState evolve_amplitudes(const SystemSpec& spec, const PseudomodeModel& pm,
                                 const AmplitudeState& a0, double t, double abs_tol = 1e-12,
                                 double rel_tol = 1e-12);

// Reservoir sampled on a uniform frequency grid; per-mode weight D(w)*dw/(2*pi) so
// that sum_lambda |g_{i lambda}|^2 = Omega_i^2 up to the captured-weight defect.
struct DiscretizedBath {
    Eigen::VectorXd frequencies;
    Eigen::VectorXd weights;
    double captured_weight{0.0};  // sum of weights; 1 in the continuum limit
};

// Uniform midpoint grid over [min omega_c - W, max omega_c + W] with
// W = window_widths * max gamma. The default width keeps >= 99% of the spectral
// weight inside the window in closed form; a narrower choice errors out when the
// captured fraction drops below 99%.
DiscretizedBath discretize_bath(const SpectralDensity& sd, int bath_modes,
                                double window_widths = 40.0);

// Full Schrodinger evolution of chains + sampled bath, bath_modes >= 100, no sink.
// The p_pm_1 column reports the aggregate bath population.
TimeSeries integrate_discretized_bath(const SystemSpec& spec, const SpectralDensity& sd,
                                      int bath_modes, const RunConfig& run,
                                      double window_widths = 40.0);

}  // namespace spintrans
