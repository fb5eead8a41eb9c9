#include "gwphase/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "gwphase/errors.hpp"

namespace gwphase {

namespace {

TimeGrid stepping_grid(const HamiltonianLoop& loop, std::size_t steps) {
    if (steps + 1 < loop.grid.size())
        throw ContractViolation("evolve: need at least as many steps as loop intervals");
    return TimeGrid(loop.grid.t0(), loop.grid.t1(), steps + 1);
}

}  // namespace

EvolutionResult evolve(const HamiltonianLoop& loop, std::size_t branch, std::size_t steps,
                       const TrackOptions& opt) {
    const auto branches = track_branches(loop, opt);
    if (branch >= branches.size())
        throw ContractViolation("evolve: branch index out of range");
    const auto& b = branches[branch];

    const ComplexVector psi0 = b.right.front();
    const OdeRhs rhs = [&loop](double t, const ComplexVector& y) -> ComplexVector {
        return -kI * (loop.at(t) * y);
    };
    EvolutionResult r;
    r.final_state = integrate_ode(rhs, psi0, stepping_grid(loop, steps));
    r.survival_amplitude = b.left.front().dot(r.final_state) / b.left.front().dot(psi0);
    r.dynamical_phase = quadrature(b.eigenvalues, b.grid);
    r.predicted = phase_line_integral(b);

    cplx extracted = -kI * principal_log(r.survival_amplitude) + r.dynamical_phase;
    const double turns = std::round((r.predicted.value.real() - extracted.real()) / (2.0 * kPi));
    extracted += 2.0 * kPi * turns;
    r.extracted_geometric = extracted;
    return r;
}

AdiabaticityReport adiabaticity_diagnostic(const HamiltonianLoop& loop, const TrackOptions& opt) {
    const auto branches = track_branches(loop, opt);
    AdiabaticityReport rep;
    rep.drive_frequency = 2.0 * kPi / loop.grid.duration();
    rep.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < loop.grid.size(); ++k)
        for (std::size_t i = 0; i < branches.size(); ++i)
            for (std::size_t j = i + 1; j < branches.size(); ++j) {
                const double gap =
                    std::abs((branches[i].eigenvalues[k] - branches[j].eigenvalues[k]).real());
                if (gap < rep.min_gap) {
                    rep.min_gap = gap;
                    rep.gap_time = loop.grid[k];
                }
            }
    if (branches.size() < 2)
        rep.min_gap = std::numeric_limits<double>::infinity();
    rep.ratio = rep.min_gap / rep.drive_frequency;
    rep.adiabatic = rep.ratio >= AdiabaticityReport::threshold;
    return rep;
}

std::vector<SweepPoint> adiabatic_sweep(const std::function<HamiltonianLoop(double)>& family,
                                        const std::vector<double>& periods, std::size_t branch,
                                        double steps_per_time, unsigned threads,
                                        const TrackOptions& opt) {
    std::vector<SweepPoint> out(periods.size());
    auto run = [&](std::size_t n) {
        const double period = periods[n];
        const auto loop = family(period);
        const auto steps = std::max<std::size_t>(
            loop.grid.size() - 1, static_cast<std::size_t>(std::ceil(steps_per_time * period)));
        SweepPoint p;
        p.period = period;
        p.result = evolve(loop, branch, steps, opt);
        p.error = std::abs(p.result.extracted_geometric - p.result.predicted.value);
        p.report = adiabaticity_diagnostic(loop, opt);
        out[n] = std::move(p);
    };

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(periods.size())));
    if (threads <= 1) {
        for (std::size_t n = 0; n < periods.size(); ++n)
            run(n);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t n = t; n < periods.size(); n += threads)
                    run(n);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

ComplexMatrix propagator(const HamiltonianLoop& loop, std::size_t steps) {
    const auto n = static_cast<Eigen::Index>(loop.dim());
    const auto grid = stepping_grid(loop, steps);
    const OdeRhs rhs = [&loop](double t, const ComplexVector& y) -> ComplexVector {
        return -kI * (loop.at(t) * y);
    };
    ComplexMatrix u(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        u.col(j) = integrate_ode(rhs, ComplexVector::Unit(n, j), grid);
    return u;
}

double sudden_propagator_check(const HamiltonianLoop& loop, const FrameLoop& frames, cplx omega,
                               std::size_t steps) {
    if (frames.right.front().rows() != static_cast<Eigen::Index>(loop.dim()))
        throw ContractViolation("sudden_propagator_check: frame and loop dimensions differ");
    if (frames.rank() != loop.dim())
        throw ContractViolation("sudden_propagator_check: frame must span the whole space");
    const ComplexMatrix exact = propagator(loop, steps) * std::exp(kI * omega * loop.grid.duration());
    const ComplexMatrix geometric = holonomy_operator(frames, nonabelian_holonomy(frames));
    return (exact - geometric).norm();
}

}  // namespace gwphase
