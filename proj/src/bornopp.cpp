#include "gwphase/bornopp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gwphase/errors.hpp"

namespace gwphase {

namespace {

void check_grid(std::size_t n) {
    if (n < 8 || n > 512)
        throw ContractViolation("Born-Oppenheimer ring grid must have between 8 and 512 points");
}

void check_potentials(const BOPotentials& pot, std::size_t grid_n) {
    check_grid(grid_n);
    if (pot.size() != grid_n || pot.vector_potential.size() != grid_n ||
        pot.scalar_potential.size() != grid_n)
        throw ContractViolation("ring_spectrum: grid size does not match the potentials");
}

double max_nearest(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double worst = 0.0;
    for (const cplx& x : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const cplx& y : b)
            best = std::min(best, std::abs(x - y));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

BOPotentials bo_potentials(const FastFamily& family, std::size_t branch, std::size_t grid_n,
                           const TrackOptions& opt) {
    check_grid(grid_n);
    if (!family.hamiltonian)
        throw ContractViolation("bo_potentials: fast Hamiltonian is not set");
    if (!(family.mass > 0.0))
        throw ContractViolation("bo_potentials: slow mass must be positive");

    const TimeGrid grid(0.0, 2.0 * kPi, grid_n + 1);
    std::vector<ComplexMatrix> hs;
    for (std::size_t k = 0; k < grid_n; ++k)
        hs.push_back(family.hamiltonian(grid[k]));
    const ComplexMatrix last = family.hamiltonian(2.0 * kPi);
    if ((last - hs.front()).norm() > 1e-9 * std::max(1.0, hs.front().norm()))
        throw ContractViolation("bo_potentials: fast family is not 2 pi periodic");
    hs.push_back(hs.front());

    const auto branches = track_branches(HamiltonianLoop(grid, std::move(hs)), opt);
    if (branch >= branches.size())
        throw ContractViolation("bo_potentials: branch index out of range");
    const auto& b = branches[branch];
    if (!b.cyclic)
        throw NonCyclic("bo_potentials: branch does not return to itself around the ring",
                        b.return_overlap);

    const double h = grid.step();
    const auto dpsi = differentiate(b.right, h, true);
    const auto dphi = differentiate(b.left, h, true);

    BOPotentials pot;
    for (std::size_t k = 0; k < grid_n; ++k) {
        const cplx norm = b.left[k].dot(b.right[k]);
        const cplx d1 = b.left[k].dot(dpsi[k]) / norm;
        const cplx curvature = dphi[k].dot(dpsi[k]) / norm - dphi[k].dot(b.right[k]) * d1 / norm;
        const cplx v = family.potential ? family.potential(grid[k]) : cplx{0.0, 0.0};
        pot.q.push_back(grid[k]);
        pot.eigenvalue.push_back(b.eigenvalues[k]);
        pot.vector_potential.push_back(kI * d1);
        pot.scalar_potential.push_back(v + b.eigenvalues[k] + curvature / (2.0 * family.mass));
    }
    return pot;
}

cplx vector_potential_loop(const BOPotentials& pot) {
    cplx sum{0.0, 0.0};
    for (const cplx& a : pot.vector_potential)
        sum += a;
    return sum * (2.0 * kPi / static_cast<double>(pot.size()));
}

std::vector<cplx> ring_spectrum(const BOPotentials& pot, double mass, std::size_t grid_n) {
    check_potentials(pot, grid_n);
    if (!(mass > 0.0))
        throw ContractViolation("ring_spectrum: slow mass must be positive");

    const auto n = static_cast<Eigen::Index>(grid_n);
    const double h = 2.0 * kPi / static_cast<double>(grid_n);
    const auto& a = pot.vector_potential;
    std::vector<cplx> closed(a);
    closed.push_back(a.front());
    const auto da = differentiate(std::span<const cplx>(closed), h, true);

    // Link integral over [Q_k, Q_k+1]: trapezoid plus its endpoint correction.
    std::vector<cplx> link(grid_n);
    for (std::size_t k = 0; k < grid_n; ++k) {
        const std::size_t k1 = (k + 1) % grid_n;
        link[k] = 0.5 * h * (a[k] + a[k1]) - h * h / 12.0 * (da[k1] - da[k]);
    }

    const double kin = 1.0 / (2.0 * mass * h * h);
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index k1 = (k + 1) % n;
        m(k, k) += 2.0 * kin + pot.scalar_potential[static_cast<std::size_t>(k)];
        m(k, k1) -= kin * std::exp(-kI * link[static_cast<std::size_t>(k)]);
        m(k1, k) -= kin * std::exp(kI * link[static_cast<std::size_t>(k)]);
    }
    if (!all_finite(m))
        throw ContractViolation("ring_spectrum: potentials must be finite");

    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
    if (solver.info() != Eigen::Success)
        throw SolverFailure("ring_spectrum: eigenvalue iteration did not converge",
                            std::numeric_limits<double>::infinity());
    std::vector<cplx> out(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    std::sort(out.begin(), out.end(), [](cplx x, cplx y) {
        return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
    });
    return out;
}

double flux_equivalence(const BOPotentials& pot, double mass, std::size_t grid_n,
                        const std::function<double(double q)>& dlambda) {
    check_potentials(pot, grid_n);
    BOPotentials shifted = pot;
    for (std::size_t k = 0; k < grid_n; ++k)
        shifted.vector_potential[k] += dlambda(pot.q[k]);
    const auto s0 = ring_spectrum(pot, mass, grid_n);
    const auto s1 = ring_spectrum(shifted, mass, grid_n);
    return std::max(max_nearest(s0, s1), max_nearest(s1, s0));
}

double flux_equivalence(const BOPotentials& pot, double mass, std::size_t grid_n, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coef(-0.5, 0.5);
    double c[3], s[3];
    for (int j = 0; j < 3; ++j) {
        c[j] = coef(rng);
        s[j] = coef(rng);
    }
    // dLambda/dQ = sum_{j=1..3} c_j cos(jQ) + s_j sin(jQ) has zero mean, so Lambda is periodic.
    return flux_equivalence(pot, mass, grid_n, [c, s](double q) {
        double d = 0.0;
        for (int j = 0; j < 3; ++j)
            d += c[j] * std::cos((j + 1) * q) + s[j] * std::sin((j + 1) * q);
        return d;
    });
}

}  // namespace gwphase
