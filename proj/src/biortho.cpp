#include "gwphase/biortho.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gwphase/errors.hpp"

namespace gwphase {

ComplexMatrix BiorthogonalSystem::reconstruct() const {
    const auto n = static_cast<Eigen::Index>(dim());
    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < dim(); ++i)
        h += eigenvalues[i] * (right[i] * left[i].adjoint()) / overlaps[i];
    return h;
}

BiorthogonalSystem biorthogonal_decompose(const ComplexMatrix& h, const BiorthoOptions& opt) {
    const auto right_pairs = eig_dense(h, opt.tol);
    const std::size_t n = right_pairs.size();
    const double scale = std::max(1.0, h.norm());

    const auto left_pairs = eig_dense(h.adjoint(), opt.tol);
    BiorthogonalSystem sys;
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx target = std::conj(right_pairs[i].value);
        std::size_t best = n;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            const double d = std::abs(left_pairs[j].value - target);
            if (!used[j] && d < best_dist) {
                best = j;
                best_dist = d;
            }
        }
        used[best] = true;

        const ComplexVector& psi = right_pairs[i].vector;
        ComplexVector phi = left_pairs[best].vector;
        const cplx ov = phi.dot(psi);  // <phi|psi>
        const double mag = std::abs(ov);
        if (mag < opt.exceptional_floor) {
            std::ostringstream msg;
            msg << "biorthogonal_decompose: normalized overlap " << mag
                << " below the exceptional-point floor " << opt.exceptional_floor;
            throw ExceptionalPoint(msg.str(), mag);
        }
        phi *= ov / mag;
        sys.eigenvalues.push_back(right_pairs[i].value);
        sys.right.push_back(psi);
        sys.left.push_back(phi);
        sys.overlaps.push_back(mag);
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(sys.eigenvalues[i] - sys.eigenvalues[j]) < opt.degeneracy_floor * scale) {
                std::ostringstream msg;
                msg << "biorthogonal_decompose: eigenvalues " << sys.eigenvalues[i] << " and "
                    << sys.eigenvalues[j] << " closer than the degeneracy floor";
                throw NearDegeneracy(msg.str());
            }

    // Mutual orthogonality; accuracy degrades like eps times the eigenvector
    // condition number 1/overlap.
    double worst = 0.0;
    double min_overlap = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        min_overlap = std::min(min_overlap, sys.overlaps[i].real());
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                worst = std::max(worst, std::abs(sys.left[i].dot(sys.right[j])));
    }
    if (worst > 1e2 * opt.tol / min_overlap) {
        std::ostringstream msg;
        msg << "biorthogonal_decompose: left/right vectors not mutually orthogonal (" << worst << ")";
        throw SolverFailure(msg.str(), worst);
    }
    return sys;
}

HamiltonianLoop::HamiltonianLoop(TimeGrid g, std::vector<ComplexMatrix> h)
    : grid(g), hamiltonians(std::move(h)) {
    if (hamiltonians.size() != grid.size())
        throw ContractViolation("HamiltonianLoop: one matrix per grid sample required");
    const auto n = hamiltonians.front().rows();
    for (const auto& m : hamiltonians)
        if (m.rows() != n || m.cols() != n || !all_finite(m))
            throw ContractViolation("HamiltonianLoop: matrices must be finite and equally sized");
}

bool HamiltonianLoop::closed(double tol) const {
    const auto& a = hamiltonians.front();
    const auto& b = hamiltonians.back();
    return (a - b).cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

bool HamiltonianLoop::hermitian(double tol) const {
    for (const auto& m : hamiltonians)
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol * std::max(1.0, m.cwiseAbs().maxCoeff()))
            return false;
    return true;
}

ComplexMatrix HamiltonianLoop::at(double t) const {
    const double x = (t - grid.t0()) / grid.step();
    if (x <= 0.0)
        return hamiltonians.front();
    const auto last = grid.size() - 1;
    if (x >= static_cast<double>(last))
        return hamiltonians.back();
    const auto k = static_cast<std::size_t>(std::floor(x));
    const double w = x - static_cast<double>(k);
    if (k >= last)
        return hamiltonians.back();
    return (1.0 - w) * hamiltonians[k] + w * hamiltonians[k + 1];
}

std::vector<EigenbranchPath> track_branches(const HamiltonianLoop& loop, const TrackOptions& opt) {
    const std::size_t ns = loop.grid.size();
    std::vector<BiorthogonalSystem> systems;
    systems.reserve(ns);
    for (const auto& h : loop.hamiltonians)
        systems.push_back(biorthogonal_decompose(h, opt.biortho));

    const std::size_t dim = systems.front().dim();
    std::vector<EigenbranchPath> paths;
    for (std::size_t b = 0; b < dim; ++b) {
        EigenbranchPath p{b, loop.grid, {}, {}, {}, false, 1.0};
        p.eigenvalues.reserve(ns);
        p.right.reserve(ns);
        p.left.reserve(ns);
        p.eigenvalues.push_back(systems[0].eigenvalues[b]);
        p.right.push_back(systems[0].right[b]);
        p.left.push_back(systems[0].left[b]);
        paths.push_back(std::move(p));
    }

    for (std::size_t k = 1; k < ns; ++k) {
        const auto& sys = systems[k];
        std::vector<bool> taken(dim, false);
        for (auto& p : paths) {
            const cplx w = p.eigenvalues.back();
            std::size_t best = 0;
            double d1 = std::numeric_limits<double>::infinity();
            double d2 = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < dim; ++j) {
                const double d = std::abs(sys.eigenvalues[j] - w);
                if (d < d1) {
                    d2 = d1;
                    d1 = d;
                    best = j;
                } else if (d < d2) {
                    d2 = d;
                }
            }
            if (taken[best] || (dim > 1 && d1 > opt.collision_ratio * d2)) {
                std::ostringstream msg;
                msg << "track_branches: ambiguous eigenvalue matching at t = " << loop.grid[k];
                throw BranchCollision(msg.str());
            }
            taken[best] = true;

            ComplexVector psi = sys.right[best];
            ComplexVector phi = sys.left[best];
            const cplx ov = p.right.back().dot(psi);
            if (std::abs(ov) < 1e-3) {
                std::ostringstream msg;
                msg << "track_branches: eigenvector jumps at t = " << loop.grid[k]
                    << "; refine the loop sampling";
                throw BranchCollision(msg.str());
            }
            const cplx phase = std::conj(ov) / std::abs(ov);
            psi *= phase;
            phi *= phase;
            p.eigenvalues.push_back(sys.eigenvalues[best]);
            p.right.push_back(std::move(psi));
            p.left.push_back(std::move(phi));
        }
    }

    if (loop.closed()) {
        const double intervals = static_cast<double>(ns - 1);
        for (auto& p : paths) {
            const cplx ret = p.right.front().dot(p.right.back());
            p.return_overlap = std::abs(ret);
            if (p.return_overlap <= opt.return_floor)
                continue;
            const double alpha = std::arg(ret);
            for (std::size_t k = 1; k < ns; ++k) {
                const cplx g = std::exp(-kI * alpha * (static_cast<double>(k) / intervals));
                p.right[k] *= g;
                p.left[k] *= g;
            }
            p.right.back() = p.right.front();
            p.left.back() = p.left.front();
            p.eigenvalues.back() = p.eigenvalues.front();
            p.cyclic = true;
        }
    } else {
        for (auto& p : paths)
            p.return_overlap = std::abs(p.right.front().dot(p.right.back()));
    }
    return paths;
}

const EigenbranchPath& branch_nearest(const std::vector<EigenbranchPath>& branches, cplx w) {
    if (branches.empty())
        throw ContractViolation("branch_nearest: no branches");
    auto it = std::min_element(branches.begin(), branches.end(), [w](const auto& a, const auto& b) {
        return std::abs(a.eigenvalues.front() - w) < std::abs(b.eigenvalues.front() - w);
    });
    return *it;
}

EigenbranchPath reversed(const EigenbranchPath& path) {
    EigenbranchPath r = path;
    std::reverse(r.eigenvalues.begin(), r.eigenvalues.end());
    std::reverse(r.right.begin(), r.right.end());
    std::reverse(r.left.begin(), r.left.end());
    return r;
}

}  // namespace gwphase
