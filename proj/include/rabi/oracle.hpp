// oracle.hpp — truncated Fock-space diagonalization, independent of the
// G-function path. Assembled in the σx eigenbasis, where the coupling and
// bias are spin-diagonal and Δ is the only spin-off-diagonal element.

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rabi/params.hpp"

namespace rabi::oracle {

struct TruncatedHamiltonian {
    ModelParams params;
    int M{60};               // highest Fock state index; dimension = 2(M+1)
    Eigen::MatrixXd matrix;  // symmetric by construction
};

// Basis |n⟩⊗|s⟩, n = 0..M, s = ±1 (σx eigenstates). Matrix elements:
//   ⟨n,s|H|n,s⟩   = omega n + s ε
//   ⟨n+1,s|H|n,s⟩ = s g sqrt(n+1)
//   ⟨n,+|H|n,−⟩   = Δ
TruncatedHamiltonian build_hamiltonian(const ModelParams& params, int M);

// Smallest `count` eigenvalues, ascending. Cyclic Jacobi rotations; the
// off-diagonal norm is driven below 1e-12 * (Frobenius norm).
std::vector<double> eigenvalues(const TruncatedHamiltonian& h, int count);

// Jacobi eigensolve of an arbitrary symmetric matrix (full spectrum, ascending).
std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, int max_sweeps = 50,
                                       double off_tol = 1e-12);

// Convenience: lowest `count` eigenvalues at truncation M.
std::vector<double> lowest_eigenvalues(const ModelParams& params, int count, int M = 60);

// ------------------------------ Fixture I/O ---------------------------------

// One pinned reference eigenvalue; CSV columns
//   omega,g,delta,epsilon,M,level_index,energy  (17 significant digits).
struct FixtureEntry {
    double omega, g, delta, epsilon;
    int M;
    int level_index;
    double energy;
};

void write_fixture_csv(const std::string& path, const std::vector<FixtureEntry>& entries);
std::vector<FixtureEntry> read_fixture_csv(const std::string& path);

}  // namespace rabi::oracle
