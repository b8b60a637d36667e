// hamiltonian.hpp — XY-chain eigenbasis and the extended Hamiltonian in site and eigen bases

#pragma once

#include <Eigen/Dense>

#include "spintrans/model.hpp"
#include "spintrans/spectral.hpp"

namespace spintrans {

// Dense storage guard; larger systems are out of scope for this solver.
inline constexpr int kDimensionCap = 4096;

// Sine-transform eigenbasis of one open XY chain:
//   u(l,i) = sqrt(2/(M+1)) * sin(i * q_l),  q_l = pi*l/(M+1),
//   E_l = omega0 + 2J cos(q_l).
// u is real orthogonal (and symmetric); row l holds eigenmode l over sites i.
struct EigenBasis {
    Eigen::MatrixXd u;
    Eigen::VectorXd energies;

    int chain_len() const { return static_cast<int>(energies.size()); }
};

EigenBasis build_eigenbasis(int chain_len, double omega0, double j_coupling);

enum class Basis { Site, Eigen };

// Hermitian Hamiltonian over the single-excitation StateLayout. The ground and sink
// rows are identically zero; the sink couples only through the dissipator.
struct ExtendedHamiltonian {
    Eigen::MatrixXcd matrix;
    Basis basis{Basis::Site};
    StateLayout layout;
};

// Site basis: on-site omega0, nearest-neighbor J within each chain, pseudomode
// diagonals Re(z_l), and site-to-pseudomode couplings Omega_j * sqrt(-i r_l) * u(r,l).
ExtendedHamiltonian build_site_hamiltonian(const SystemSpec& spec, const PseudomodeModel& pm);

// Eigen basis: diagonal E_l per chain; only the r-th eigenmode of each chain couples
// to the pseudomodes, with strength Omega_j * sqrt(-i r_l).
ExtendedHamiltonian build_eigen_hamiltonian(const SystemSpec& spec, const PseudomodeModel& pm);

// Conjugates the chain blocks by u (identity on ground/pseudomodes/sink), toggling
// the basis tag. Applying it twice returns the original matrix.
ExtendedHamiltonian change_of_basis(const ExtendedHamiltonian& h, const EigenBasis& basis);

}  // namespace spintrans
