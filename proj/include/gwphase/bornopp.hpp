#pragma once

// Born-Oppenheimer reduction on a ring: a slow coordinate Q in [0, 2 pi)
// coupled to a metastable fast subsystem h_eff(Q).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "gwphase/biortho.hpp"

namespace gwphase {

struct FastFamily {
    std::function<ComplexMatrix(double q)> hamiltonian;  // h_eff(Q), 2 pi periodic
    double mass = 1.0;                                   // M
    std::function<cplx(double q)> potential;             // V(Q); empty means zero
};

/// Potentials of the slow equation
///   [ (P - A(Q))^2 / 2M + V_eff(Q) ] chi = Omega chi
/// sampled at Q_k = 2 pi k / n, k = 0..n-1.
struct BOPotentials {
    std::vector<double> q;
    std::vector<cplx> vector_potential;  // A = i <phi|d psi> / <phi|psi>
    std::vector<cplx> scalar_potential;  // V + w + (1/2M) (<d phi|d psi>/N - <d phi|psi><phi|d psi>/N^2)
    std::vector<cplx> eigenvalue;        // w(Q)

    std::size_t size() const { return q.size(); }
};

/// Potentials of branch `branch` (sorted index at Q = 0). The branch must be
/// cyclic around the ring. Derivatives are fourth-order periodic differences.
BOPotentials bo_potentials(const FastFamily& family, std::size_t branch, std::size_t grid_n,
                           const TrackOptions& opt = {});

/// oint A dQ by the trapezoid rule on the periodic grid.
cplx vector_potential_loop(const BOPotentials& pot);

/// Eigenvalues of the periodic discretization with link variables
///   exp(-i theta_{k+1/2}), theta_{k+1/2} ~ int_{Q_k}^{Q_{k+1}} A dQ,
/// sorted by (Re, Im). `grid_n` must equal pot.size() and be at most 512.
std::vector<cplx> ring_spectrum(const BOPotentials& pot, double mass, std::size_t grid_n);

/// Largest distance between each eigenvalue of the original spectrum and the
/// nearest eigenvalue after A -> A + dLambda/dQ (and vice versa).
double flux_equivalence(const BOPotentials& pot, double mass, std::size_t grid_n,
                        const std::function<double(double q)>& dlambda);

/// Same with a random smooth periodic Lambda (a few Fourier modes drawn from
/// a seeded generator).
double flux_equivalence(const BOPotentials& pot, double mass, std::size_t grid_n,
                        std::uint32_t seed = 1);

}  // namespace gwphase
