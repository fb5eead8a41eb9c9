#pragma once

// Exact evolution under i d/dt |psi> = H(t) |psi> and comparison with the
// adiabatic geometric prediction.

#include <cstddef>
#include <functional>
#include <vector>

#include "gwphase/geomphase.hpp"

namespace gwphase {

struct EvolutionResult {
    ComplexVector final_state;
    cplx survival_amplitude;  // <phi_i(0)|psi(T)> / <phi_i(0)|psi_i(0)>
    cplx dynamical_phase;     // int w_i dt
    cplx extracted_geometric; // -i ln(c) + int w_i dt, real part on the predicted sheet
    GWPhase predicted;        // phase_line_integral of the tracked branch
};

/// Starts in psi_i(0) of branch `branch` (sorted index at t0) and integrates
/// with H linearly interpolated between loop samples using `steps` RK4 steps.
EvolutionResult evolve(const HamiltonianLoop& loop, std::size_t branch, std::size_t steps,
                       const TrackOptions& opt = {});

struct AdiabaticityReport {
    double min_gap = 0.0;       // min over t and i != j of |Re(w_i - w_j)|
    double gap_time = 0.0;      // where the minimum is attained
    double drive_frequency = 0.0;  // 2 pi / T
    double ratio = 0.0;
    bool adiabatic = false;     // ratio >= threshold

    static constexpr double threshold = 10.0;
};

AdiabaticityReport adiabaticity_diagnostic(const HamiltonianLoop& loop, const TrackOptions& opt = {});

struct SweepPoint {
    double period = 0.0;
    double error = 0.0;  // |extracted - predicted|
    EvolutionResult result;
    AdiabaticityReport report;
};

/// Evolves the same loop shape at each period T. `family(T)` builds the loop;
/// steps = max(samples, ceil(steps_per_time * T)). Points are computed on up
/// to `threads` workers and returned in the order of `periods`.
std::vector<SweepPoint> adiabatic_sweep(const std::function<HamiltonianLoop(double)>& family,
                                        const std::vector<double>& periods, std::size_t branch,
                                        double steps_per_time, unsigned threads = 1,
                                        const TrackOptions& opt = {});

/// Full propagator U(T) of the loop (columns evolved from the identity).
ComplexMatrix propagator(const HamiltonianLoop& loop, std::size_t steps);

/// ||U(T) e^{i w T} - holonomy operator||_F for a loop whose frame shares the
/// common eigenvalue w.
double sudden_propagator_check(const HamiltonianLoop& loop, const FrameLoop& frames, cplx omega,
                               std::size_t steps);

}  // namespace gwphase
