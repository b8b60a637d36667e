// spectral.hpp — Reservoir structure functions, pole/residue extraction, pseudomode parameters

#pragma once

#include <complex>
#include <vector>

namespace spintrans {

using Complex = std::complex<double>;

// One Lorentzian line: weight * gamma / ((w - omega_c)^2 + (gamma/2)^2).
struct LorentzianTerm {
    double weight{1.0};
    double omega_c{1.0};
    double gamma{0.1};
};

// Normalized reservoir structure function D(w), integral over the real line = 2*pi.
// Only rational densities with simple lower-half-plane poles are supported; weights
// are rescaled to sum to one at construction.
struct SpectralDensity {
    enum class Kind { Lorentzian, SumOfLorentzians };

    Kind kind{Kind::Lorentzian};
    std::vector<LorentzianTerm> terms;

    static SpectralDensity lorentzian(double omega_c, double gamma);
    static SpectralDensity sum(std::vector<LorentzianTerm> terms);
};

// D(w) = sum_m w_m * gamma_m / ((w - omega_c,m)^2 + (gamma_m/2)^2); strictly positive.
double evaluate_density(const SpectralDensity& sd, double omega);

// One damped mode per lower-half-plane pole z_l of D. `weight` is -i*residue, real and
// nonnegative for Lorentzian sums; the mode couples to excited state i with
// g_il = Omega_i * coupling_factor, coupling_factor = sqrt(-i*residue) (principal branch).
struct PseudomodeMode {
    Complex z;                // pole, Im(z) = -gamma/2
    Complex weight;           // -i * residue
    Complex coupling_factor;  // sqrt(weight)
};

struct PseudomodeModel {
    std::vector<PseudomodeMode> modes;

    int size() const { return static_cast<int>(modes.size()); }
    Complex coupling(double omega_big, int mode) const;  // 0-based mode
    double decay_rate(int mode) const;                   // -2 * Im(z)

    // Degenerate single-mode model; gamma = 0 gives the lossless (delta-line) limit,
    // which has no normalizable SpectralDensity counterpart.
    static PseudomodeModel single_mode(double omega_c, double gamma);
};

// Closed-form partial fractions: z_m = omega_c,m - i*gamma_m/2 with -i*residue = w_m.
// Terms sharing a pole are merged, zero-weight terms dropped. Sum of weights is 1.
PseudomodeModel extract_pseudomodes(const SpectralDensity& sd);

// Memory kernel by residue sum, G(dt) = ci*cj * sum_l (-i r_l) e^{-i z_l dt}; G(0) = ci*cj.
Complex kernel(const SpectralDensity& sd, double coupling_i, double coupling_j, double dt);

}  // namespace spintrans
