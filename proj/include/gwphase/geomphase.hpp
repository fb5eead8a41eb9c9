#pragma once

// Complex geometric phase of cyclically transported left/right eigenstates.
//
// Conventions used throughout:
//   - a branch carries kets psi(t) and phi(t); the bra of the left state is
//     phi(t)^dagger, so <phi|psi> = phi.dot(psi) in Eigen;
//   - the phase is reported as an unwrapped complex value: its real part is
//     accumulated continuously from the integrand and is not reduced mod 2pi.

#include <cstddef>
#include <functional>
#include <vector>

#include "gwphase/biortho.hpp"

namespace gwphase {

struct GWPhase {
    cplx value{0.0, 0.0};
    double max_integrand = 0.0;
    std::size_t grid_size = 0;

    /// Re(value) wrapped into (-pi, pi].
    double principal() const;
    /// Integer k with Re(value) = principal() + 2 pi k.
    long branch() const;
};

/// -i ln<psi(0)|psi(T)> + i int <psi|d_t psi> dt on a Hermitian loop.
/// The loop is only used to check hermiticity.
GWPhase aa_phase(const HamiltonianLoop& loop, const EigenbranchPath& branch);

/// i oint <phi|d_t psi> / <phi|psi> dt; only meaningful in a single-valued gauge.
GWPhase phase_naive(const EigenbranchPath& branch);

/// Gauge-invariant two-state phase:
///   -(i/2) ln[<phi(0)|psi(T)> / <phi(T)|psi(0)>]
///     + (i/2) int (<phi|d psi> - <d phi|psi>) / <phi|psi> dt.
/// Invariant under independent nonvanishing complex rescalings of psi(t)
/// and phi(t). The logarithm is taken on the principal branch.
GWPhase phase_line_integral(const EigenbranchPath& branch);

/// Same expression without requiring a cyclic branch. For an open path the
/// logarithm closes the path between its end states.
GWPhase two_state_phase(const EigenbranchPath& branch);

/// Imaginary part of the two-state phase along an open path:
///   (1/2) Re int (<phi|d psi> - <d phi|psi>) / <phi|psi> dt
///     - (1/2) [ln(|psi| / |phi|)]_0^T.
/// Invariant under reparametrization and gauge rescaling; equals
/// Im(phase_line_integral) on closed loops.
double im_phase_open_path(const EigenbranchPath& branch);

/// Chart (u, v) -> H on the unit square. The chart must also be defined a
/// stencil step outside the square.
///
/// The loop along u at v = 1 is the boundary of interest; the v = 0 edge is
/// normally collapsed to a point (a cap), and the u = 0 and u = 1 edges
/// coincide. In general the surface integral equals the phase along v = 1
/// minus the phase along v = 0.
struct ParameterSurface {
    std::function<ComplexMatrix(double u, double v)> chart;
    std::size_t n_u = 200;
    std::size_t n_v = 200;
    double stencil_step = 1e-4;
};

/// Curvature density F_uv with phi_GW = int int F_uv du dv:
///   F_uv = i [ <d_v phi|d_u psi>/<phi|psi> - <d_v phi|psi><phi|d_u psi>/<phi|psi>^2 - (u <-> v) ].
/// Branch `index` is the sorted eigenvalue position at (u, v); neighbouring
/// stencil states are matched by eigenvalue and phase-aligned to the centre.
cplx two_form(const ParameterSurface& surface, std::size_t index, double u, double v,
              const BiorthoOptions& opt = {});

/// Centre state and its four stencil neighbours at (u +- h, v) and (u, v +- h).
struct StencilStates {
    ComplexVector psi, phi;
    ComplexVector psi_up, psi_um, psi_vp, psi_vm;
    ComplexVector phi_up, phi_um, phi_vp, phi_vm;
    double step = 1e-4;
};

/// Central-difference evaluation of the curvature density from stencil states.
/// Neighbours are first rescaled to <phi|psi_x> = <phi_x|psi> = <phi|psi>, so the
/// result does not depend on how the five states are normalized.
cplx two_form_from_stencil(const StencilStates& s);

/// Stencil states for branch `index` at (u, v), gauge-aligned to the centre.
StencilStates surface_stencil(const ParameterSurface& surface, std::size_t index, double u, double v,
                              const BiorthoOptions& opt = {});

/// Trapezoid sum of two_form over the (n_u + 1) x (n_v + 1) node grid.
/// Rows are evaluated on up to `threads` workers and summed in row order.
GWPhase phase_surface_integral(const ParameterSurface& surface, std::size_t index,
                               unsigned threads = 1, const BiorthoOptions& opt = {});

/// Sampled frame of m right vectors (columns of `right[k]`, N x m) and their
/// left duals (`left[k]`, N x m) spanning a transported subspace.
struct FrameLoop {
    TimeGrid grid;
    std::vector<ComplexMatrix> right;
    std::vector<ComplexMatrix> left;

    FrameLoop(TimeGrid g, std::vector<ComplexMatrix> r, std::vector<ComplexMatrix> l);
    std::size_t rank() const { return static_cast<std::size_t>(right.front().cols()); }
};

/// Frame built from tracked branches, one column per branch.
FrameLoop frame_from_branches(const std::vector<EigenbranchPath>& branches);

/// Time-ordered product prod_k exp(i A_{k+1/2} dt) of the non-Hermitian
/// gauge potential A_ij = i <phi_i|d_t psi_j> / <phi_i|psi_i>, expressed in
/// the basis of the frame at t0 (m x m). The dynamical factor is excluded.
ComplexMatrix nonabelian_holonomy(const FrameLoop& frames);

/// Holonomy of a closed Hamiltonian loop using every tracked branch.
ComplexMatrix nonabelian_holonomy(const HamiltonianLoop& loop, const TrackOptions& opt = {});

/// Holonomy mapped back to an operator on the full space:
///   sum_ij |psi_i(0)> Hol_ij <phi_j(0)| / <phi_j(0)|psi_j(0)>.
ComplexMatrix holonomy_operator(const FrameLoop& frames, const ComplexMatrix& holonomy);

}  // namespace gwphase
