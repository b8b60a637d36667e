// spectral.cpp — Lorentzian structure functions and closed-form pseudomode extraction

#include "spintrans/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace spintrans {
namespace {

constexpr double kWeightSumTol = 1e-12;  // rescale silently below this, it is roundoff

void check_terms(const std::vector<LorentzianTerm>& terms) {
    if (terms.empty()) {
        throw std::invalid_argument("SpectralDensity: at least one Lorentzian term required");
    }
    for (const LorentzianTerm& t : terms) {
        if (!(t.gamma > 0.0)) {
            throw std::invalid_argument("SpectralDensity: every width gamma must be > 0");
        }
        if (t.weight < 0.0) {
            throw std::invalid_argument("SpectralDensity: weights must be >= 0");
        }
    }
}

// Weights must sum to one for the residue normalization; rescale instead of reject.
void normalize_weights(std::vector<LorentzianTerm>& terms) {
    double sum = 0.0;
    for (const LorentzianTerm& t : terms) sum += t.weight;
    if (!(sum > 0.0)) {
        throw std::invalid_argument("SpectralDensity: weights must not all vanish");
    }
    if (std::abs(sum - 1.0) <= kWeightSumTol) return;
    for (LorentzianTerm& t : terms) t.weight /= sum;
}

}  // namespace

SpectralDensity SpectralDensity::lorentzian(double omega_c, double gamma) {
    SpectralDensity sd;
    sd.kind = Kind::Lorentzian;
    sd.terms = {LorentzianTerm{1.0, omega_c, gamma}};
    check_terms(sd.terms);
    return sd;
}

SpectralDensity SpectralDensity::sum(std::vector<LorentzianTerm> terms) {
    check_terms(terms);
    normalize_weights(terms);
    SpectralDensity sd;
    sd.kind = Kind::SumOfLorentzians;
    sd.terms = std::move(terms);
    return sd;
}

double evaluate_density(const SpectralDensity& sd, double omega) {
    double value = 0.0;
    for (const LorentzianTerm& t : sd.terms) {
        const double d = omega - t.omega_c;
        value += t.weight * t.gamma / (d * d + 0.25 * t.gamma * t.gamma);
    }
    return value;
}

Complex PseudomodeModel::coupling(double omega_big, int mode) const {
    return omega_big * modes.at(static_cast<std::size_t>(mode)).coupling_factor;
}

double PseudomodeModel::decay_rate(int mode) const {
    return -2.0 * modes.at(static_cast<std::size_t>(mode)).z.imag();
}

PseudomodeModel PseudomodeModel::single_mode(double omega_c, double gamma) {
    if (gamma < 0.0) {
        throw std::invalid_argument("PseudomodeModel: gamma must be >= 0");
    }
    PseudomodeModel pm;
    pm.modes = {PseudomodeMode{Complex{omega_c, -gamma / 2.0}, Complex{1.0, 0.0},
                               Complex{1.0, 0.0}}};
    return pm;
}

PseudomodeModel extract_pseudomodes(const SpectralDensity& sd) {
    check_terms(sd.terms);

    // Each term w * gamma / ((w-wc)^2 + (gamma/2)^2) has one lower-half-plane pole at
    // z = wc - i*gamma/2 with -i*residue = w. Shared poles merge; zero weights drop.
    PseudomodeModel pm;
    double total = 0.0;
    for (const LorentzianTerm& t : sd.terms) {
        if (t.weight == 0.0) continue;
        total += t.weight;
        const Complex z{t.omega_c, -t.gamma / 2.0};
        bool merged = false;
        for (PseudomodeMode& mode : pm.modes) {
            if (mode.z == z) {
                mode.weight += t.weight;
                merged = true;
                break;
            }
        }
        if (!merged) pm.modes.push_back(PseudomodeMode{z, Complex{t.weight, 0.0}, Complex{}});
    }
    if (pm.modes.empty() || !(total > 0.0)) {
        throw std::invalid_argument("extract_pseudomodes: density has no usable poles");
    }
    for (PseudomodeMode& mode : pm.modes) {
        mode.weight /= total;                       // enforce sum(-i r_l) = 1 exactly
        mode.coupling_factor = std::sqrt(mode.weight);  // principal branch
    }
    return pm;
}

Complex kernel(const SpectralDensity& sd, double coupling_i, double coupling_j, double dt) {
    if (dt < 0.0) throw std::invalid_argument("kernel: dt must be >= 0");
    const PseudomodeModel pm = extract_pseudomodes(sd);
    Complex sum{0.0, 0.0};
    const Complex minus_i{0.0, -1.0};
    for (const PseudomodeMode& mode : pm.modes) {
        sum += mode.weight * std::exp(minus_i * mode.z * dt);
    }
    return coupling_i * coupling_j * sum;
}

}  // namespace spintrans
