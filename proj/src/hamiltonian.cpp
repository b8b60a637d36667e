// hamiltonian.cpp — Chain eigenbasis and assembly of the extended Hamiltonian

#include "spintrans/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spintrans {
namespace {

StateLayout layout_for(const SystemSpec& spec, const PseudomodeModel& pm) {
    const int dim = state_dimension(spec, pm.size());  // validates spec and pm.size()
    if (dim > kDimensionCap) {
        throw invariant_error("dimension cap exceeded: D = " + std::to_string(dim) +
                              " > " + std::to_string(kDimensionCap));
    }
    return StateLayout{spec.n_chains, spec.chain_len, pm.size()};
}

// Pseudomode diagonal Re(z_m); ground and sink rows stay zero.
void fill_pseudomode_block(Eigen::MatrixXcd& h, const StateLayout& layout,
                           const PseudomodeModel& pm) {
    for (int m = 1; m <= pm.size(); ++m) {
        const int p = layout.pseudomode(m);
        h(p, p) = pm.modes[static_cast<std::size_t>(m - 1)].z.real();
    }
}

}  // namespace

EigenBasis build_eigenbasis(int chain_len, double omega0, double j_coupling) {
    if (chain_len < 1) throw std::invalid_argument("build_eigenbasis: chain_len must be >= 1");
    const int m = chain_len;
    const double norm = std::sqrt(2.0 / (m + 1));

    EigenBasis basis;
    basis.u.resize(m, m);
    basis.energies.resize(m);
    for (int l = 1; l <= m; ++l) {
        const double q = std::numbers::pi * l / (m + 1);
        basis.energies(l - 1) = omega0 + 2.0 * j_coupling * std::cos(q);
        for (int i = 1; i <= m; ++i) {
            basis.u(l - 1, i - 1) = norm * std::sin(i * q);
        }
    }
    return basis;
}

ExtendedHamiltonian build_site_hamiltonian(const SystemSpec& spec, const PseudomodeModel& pm) {
    const StateLayout layout = layout_for(spec, pm);
    const EigenBasis basis = build_eigenbasis(spec.chain_len, spec.omega0, spec.j_coupling);

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(layout.dim(), layout.dim());
    for (int j = 1; j <= spec.n_chains; ++j) {
        for (int l = 1; l <= spec.chain_len; ++l) {
            const int row = layout.site(j, l);
            h(row, row) = spec.omega0;
            if (l < spec.chain_len) {
                h(row, layout.site(j, l + 1)) = spec.j_coupling;
                h(layout.site(j, l + 1), row) = spec.j_coupling;
            }
            // Coupling design g = Omega_j * sqrt(-i r_m) * u(r, l): in the eigenbasis
            // only mode r of each chain talks to the reservoir.
            for (int m = 1; m <= pm.size(); ++m) {
                const Complex g = pm.coupling(spec.omega_big[static_cast<std::size_t>(j - 1)],
                                              m - 1) *
                                  basis.u(spec.r_index - 1, l - 1);
                const int p = layout.pseudomode(m);
                h(row, p) = g;
                h(p, row) = std::conj(g);
            }
        }
    }
    fill_pseudomode_block(h, layout, pm);
    return ExtendedHamiltonian{std::move(h), Basis::Site, layout};
}

ExtendedHamiltonian build_eigen_hamiltonian(const SystemSpec& spec, const PseudomodeModel& pm) {
    const StateLayout layout = layout_for(spec, pm);
    const EigenBasis basis = build_eigenbasis(spec.chain_len, spec.omega0, spec.j_coupling);

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(layout.dim(), layout.dim());
    for (int j = 1; j <= spec.n_chains; ++j) {
        for (int l = 1; l <= spec.chain_len; ++l) {
            const int row = layout.site(j, l);  // row l = eigenmode l under this tag
            h(row, row) = basis.energies(l - 1);
        }
        const int row_r = layout.site(j, spec.r_index);
        for (int m = 1; m <= pm.size(); ++m) {
            const Complex g =
                pm.coupling(spec.omega_big[static_cast<std::size_t>(j - 1)], m - 1);
            const int p = layout.pseudomode(m);
            h(row_r, p) = g;
            h(p, row_r) = std::conj(g);
        }
    }
    fill_pseudomode_block(h, layout, pm);
    return ExtendedHamiltonian{std::move(h), Basis::Eigen, layout};
}

ExtendedHamiltonian change_of_basis(const ExtendedHamiltonian& h, const EigenBasis& basis) {
    const StateLayout& layout = h.layout;
    if (basis.chain_len() != layout.chain_len) {
        throw std::invalid_argument("change_of_basis: basis dimension mismatch");
    }

    // Block transform T = diag(1, u ⊕ ... ⊕ u, 1, ..., 1): site -> eigen rows are
    // |phi_l> = sum_i u(l,i) |i>, so H' = T H T^T with the orthogonal (real) u.
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(layout.dim(), layout.dim());
    for (int j = 1; j <= layout.n_chains; ++j) {
        const int offset = layout.site(j, 1);
        t.block(offset, offset, layout.chain_len, layout.chain_len) =
            basis.u.cast<Complex>();
    }

    ExtendedHamiltonian out;
    out.layout = layout;
    if (h.basis == Basis::Site) {
        out.matrix = t * h.matrix * t.transpose();
        out.basis = Basis::Eigen;
    } else {
        out.matrix = t.transpose() * h.matrix * t;
        out.basis = Basis::Site;
    }
    return out;
}

}  // namespace spintrans
