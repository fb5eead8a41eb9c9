#pragma once

// Concrete models: the complex cone, dichroic-crystal optics and a
// metastable magnetic moment circling a line charge.

#include <cstddef>
#include <string>
#include <vector>

#include "gwphase/dynamics.hpp"
#include "gwphase/geomphase.hpp"

namespace gwphase {

// ---------------------------------------------------------------------------
// Complex cone: H = (b/2) n(t) . sigma with a complex polar angle.

struct ComplexCone {
    cplx field{1.0, 0.0};   // b, angular frequency
    cplx polar{0.5, 0.0};   // Theta, radians
    double period = 1.0;    // T
    int handedness = +1;    // +1 counter-clockwise azimuth, -1 clockwise
};

ComplexMatrix cone_hamiltonian(const ComplexCone& cone, double polar_scale, double azimuth);

/// Closed loop of H(t) with azimuth 2 pi t / T, t in [0, T].
HamiltonianLoop cone_loop(const ComplexCone& cone, std::size_t samples);

/// Sorted index of the branch with eigenvalue +b/2.
std::size_t cone_upper_index(const ComplexCone& cone);

/// Closed form -h pi (1 - cos Theta) of the upper branch.
cplx cone_expected_phase(const ComplexCone& cone);

/// Cap chart: polar angle v * Theta, azimuth 2 pi u (times handedness).
ParameterSurface cone_surface(const ComplexCone& cone, std::size_t n_u, std::size_t n_v);

/// Two-level loop sharing a frame with the cone: H = S diag(w + d/2, w - d/2) S^-1
/// with S the right eigenframe of the cone. `split` = 0 gives H = w I.
struct CommonOmegaLoop {
    HamiltonianLoop loop;
    FrameLoop frames;
};
CommonOmegaLoop common_omega_loop(const ComplexCone& cone, cplx omega, cplx split,
                                  std::size_t samples);

/// Hermitian three-level loop with a doubly degenerate level w. The
/// degenerate plane is orthogonal to a unit vector sweeping a cone of polar
/// angle `polar`; the returned frame spans that plane.
CommonOmegaLoop degenerate_doublet_loop(double polar, double omega, double gap, double period,
                                        std::size_t samples);

// ---------------------------------------------------------------------------
// Jones calculus.

/// Homogeneous slab: transfer matrix exp(-i N L).
struct JonesSegment {
    ComplexMatrix generator = ComplexMatrix::Zero(2, 2);
    double length = 0.0;
    std::string label;

    ComplexMatrix transfer() const;
    bool is_vacuum() const;
};

JonesSegment vacuum(double length);
/// Generator diag(0, -i kappa) rotated by `angle` (radians): the axis at
/// `angle` transmits, the orthogonal axis absorbs with rate kappa.
JonesSegment linear_dichroic(double kappa, double length, double angle, std::string label = "");
/// R(angle) N R(-angle).
ComplexMatrix rotate_generator(const ComplexMatrix& n, double angle);

/// Output Jones vector after the segments in order.
ComplexVector propagate_sequence(const std::vector<JonesSegment>& segments, const ComplexVector& input);

/// Total transfer matrix T_last ... T_first.
ComplexMatrix sequence_transfer(const std::vector<JonesSegment>& segments);

/// Least attenuated eigenvector of the sequence transfer matrix.
ComplexVector cycle_eigenpolarization(const std::vector<JonesSegment>& segments);

/// Mode-following amplitude of a sequence. The beam starts and ends in the
/// probe polarization e; every vacuum segment holds e, every crystal holds its
/// eigenmode of largest normalized overlap with e. At each interface the
/// tracked amplitude is multiplied by <phi_next|psi_prev>/<phi_next|psi_next>,
/// and inside a crystal by exp(-i w L).
cplx mode_following_amplitude(const std::vector<JonesSegment>& segments, const ComplexVector& probe,
                              const BiorthoOptions& opt = {});

/// -i ln(A_entangled / A_reference) of the mode-following amplitudes, with the
/// probe required to be an eigenpolarization of both exact sequence transfers
/// (throws NonCyclic with the normalized overlap otherwise). Both sequences
/// must contain the same crystals with the same lengths.
GWPhase sequence_phase_extract(const std::vector<JonesSegment>& entangled,
                               const std::vector<JonesSegment>& reference, const ComplexVector& probe,
                               const BiorthoOptions& opt = {});

/// Fiber with generator R(2 pi z / L) N R(-2 pi z / L), z in [0, L].
HamiltonianLoop helical_fiber_loop(const ComplexMatrix& generator, double total_length,
                                   std::size_t samples);

// ---------------------------------------------------------------------------
// Metastable moment around a charged line.

struct PolarPoint {
    double r = 1.0;
    double theta = 0.0;
};

/// Sampled planar trajectory; consecutive angular increments must stay
/// strictly inside (-pi, pi) and no vertex may sit at the origin.
struct PlanarPath {
    std::vector<PolarPoint> vertices;
    bool closed = false;
};

struct ACModel {
    ComplexMatrix internal_hamiltonian;  // h_eff^int
    ComplexMatrix moment;                // mu_z
    double charge_density = 0.0;         // rho
};

/// <phi_i|mu_z|psi_i> / <phi_i|psi_i>.
cplx effective_moment(const ACModel& model, std::size_t branch, const BiorthoOptions& opt = {});

struct Winding {
    long turns = 0;            // n
    double net_angle = 0.0;    // accumulated angle = theta_end - theta_start + 2 pi n
    double theta_start = 0.0;  // principal angles in (-pi, pi]
    double theta_end = 0.0;
};

Winding winding_number(const PlanarPath& path);

struct TopologicalFactor {
    cplx endpoint;     // exp(i mu rho (theta_2 - theta_1))
    cplx topological;  // exp(i mu rho n)
    cplx total() const { return endpoint * topological; }
};

/// Winding factors of the no-decay amplitude, following the literal
/// exp(i mu rho n) convention for the winding term.
TopologicalFactor topological_factor(cplx moment, double charge_density, const PlanarPath& path);

/// Geometric part n mu_i rho of the closed-path phase; the dynamical
/// oint p . dr is not included.
GWPhase ac_geometric_phase(const ACModel& model, const PlanarPath& path, std::size_t branch,
                           const BiorthoOptions& opt = {});

/// Magnitudes of the terms dropped when mu is replaced by its effective value,
/// evaluated for vector potential magnitude |a| and momentum |p| at mass m.
struct NeglectedTerms {
    double quadratic;        // a^2 / 2m |<mu^2>_i - mu_i^2|
    double interbranch_ap;   // max_{j != i} |<phi_j|mu|psi_i>/<phi_j|psi_j>| |a||p| / m
    double interbranch_a2;   // max_{j != i} |<phi_j|mu^2|psi_i>/<phi_j|psi_j>| a^2 / 2m
};
NeglectedTerms neglected_terms(const ACModel& model, std::size_t branch, double potential,
                               double momentum, double mass, const BiorthoOptions& opt = {});

}  // namespace gwphase
