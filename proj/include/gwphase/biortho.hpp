#pragma once

// Left/right eigensystems of non-Hermitian matrices and eigenbranch tracking
// around sampled loops of Hamiltonians.

#include <cstddef>
#include <vector>

#include "gwphase/numerics.hpp"

namespace gwphase {

struct BiorthoOptions {
    double tol = 1e-10;               // eigen-residual and orthogonality tolerance
    double degeneracy_floor = 1e-9;   // min |w_i - w_j| relative to max(1, ||H||)
    double exceptional_floor = 1e-6;  // min |<phi|psi>| / (|phi| |psi|)
};

/// H = sum_i w_i |psi_i><phi_i| / <phi_i|psi_i>.
///
/// Left vectors are stored as kets: the bra <phi_i| is left[i].adjoint().
/// Right and left vectors are unit norm and <phi_i|psi_i> is real positive,
/// so overlaps[i] is the normalized overlap in (0, 1].
struct BiorthogonalSystem {
    std::vector<cplx> eigenvalues;
    std::vector<ComplexVector> right;
    std::vector<ComplexVector> left;
    std::vector<cplx> overlaps;

    std::size_t dim() const { return eigenvalues.size(); }
    ComplexMatrix reconstruct() const;
};

BiorthogonalSystem biorthogonal_decompose(const ComplexMatrix& h, const BiorthoOptions& opt = {});

/// Sampled family H(t_k). Closed when the last sample repeats the first.
struct HamiltonianLoop {
    TimeGrid grid;
    std::vector<ComplexMatrix> hamiltonians;

    HamiltonianLoop(TimeGrid g, std::vector<ComplexMatrix> h);

    std::size_t dim() const { return static_cast<std::size_t>(hamiltonians.front().rows()); }
    bool closed(double tol = 1e-12) const;
    bool hermitian(double tol = 1e-12) const;

    /// Linear interpolation between samples.
    ComplexMatrix at(double t) const;
};

/// One eigenbranch tracked along a loop.
///
/// Gauge: right vectors unit norm and parallel transported between samples
/// (<psi_k|psi_{k+1}> real positive), with any loop holonomy spread evenly
/// over the samples so that a cyclic branch is smooth and single valued;
/// left vectors unit norm with <phi_k|psi_k> real positive.
struct EigenbranchPath {
    std::size_t index = 0;  // sorted position at the first sample
    TimeGrid grid;
    std::vector<cplx> eigenvalues;
    std::vector<ComplexVector> right;
    std::vector<ComplexVector> left;
    bool cyclic = false;
    double return_overlap = 1.0;  // |<psi(0)|psi(T)>| before identification

    std::size_t size() const { return eigenvalues.size(); }
};

struct TrackOptions {
    BiorthoOptions biortho{};
    double collision_ratio = 0.5;  // best/second-best distance ratio must stay below this
    double return_floor = 0.99;    // min |<psi(0)|psi(T)>| for a cyclic branch
};

/// Tracks every eigenbranch of the loop. On closed loops, branches whose
/// eigenvector returns are marked cyclic and their terminal vectors are
/// replaced by the initial ones; branches that do not return are kept with
/// cyclic = false.
std::vector<EigenbranchPath> track_branches(const HamiltonianLoop& loop, const TrackOptions& opt = {});

/// Branch whose initial eigenvalue is nearest to `w`.
const EigenbranchPath& branch_nearest(const std::vector<EigenbranchPath>& branches, cplx w);

/// Same path with reversed traversal direction on the same time grid.
EigenbranchPath reversed(const EigenbranchPath& path);

}  // namespace gwphase
