#include "gwphase/geomphase.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "gwphase/errors.hpp"

namespace gwphase {

double GWPhase::principal() const {
    return wrap_angle(value.real());
}

long GWPhase::branch() const {
    return std::lround((value.real() - principal()) / (2.0 * kPi));
}

namespace {

void require_cyclic(const EigenbranchPath& b, const char* who) {
    if (!b.cyclic) {
        std::ostringstream msg;
        msg << who << ": branch " << b.index << " is not cyclic (return overlap " << b.return_overlap
            << ")";
        throw NonCyclic(msg.str(), b.return_overlap);
    }
}

cplx checked_overlap(const ComplexVector& phi, const ComplexVector& psi, double floor, double t) {
    const cplx ov = phi.dot(psi);
    const double normalized = std::abs(ov) / (phi.norm() * psi.norm());
    if (!(normalized >= floor)) {
        std::ostringstream msg;
        msg << "overlap <phi|psi> underflow (" << normalized << ") at t = " << t;
        throw ExceptionalPoint(msg.str(), normalized);
    }
    return ov;
}

constexpr double kOverlapFloor = 1e-6;

// Periodic stencils only when the stored samples really close up; a cyclic
// branch seen in a non-periodic gauge is differentiated one-sidedly.
bool periodic_samples(const EigenbranchPath& b) {
    auto same = [](const ComplexVector& x, const ComplexVector& y) {
        return (x - y).norm() <= 1e-12 * std::max(x.norm(), y.norm());
    };
    return b.cyclic && same(b.right.front(), b.right.back()) && same(b.left.front(), b.left.back());
}

struct Integrand {
    std::vector<cplx> values;
    double max_abs = 0.0;
};

// (<phi|d psi> - <d phi|psi>) / <phi|psi> at every sample.
Integrand symmetric_integrand(const EigenbranchPath& b) {
    const double h = b.grid.step();
    const bool periodic = periodic_samples(b);
    const auto dpsi = differentiate(std::span<const ComplexVector>(b.right), h, periodic);
    const auto dphi = differentiate(std::span<const ComplexVector>(b.left), h, periodic);
    Integrand out;
    out.values.resize(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) {
        const cplx ov = checked_overlap(b.left[k], b.right[k], kOverlapFloor, b.grid[k]);
        out.values[k] = (b.left[k].dot(dpsi[k]) - dphi[k].dot(b.right[k])) / ov;
        out.max_abs = std::max(out.max_abs, std::abs(out.values[k]));
    }
    return out;
}

void require_samples(const EigenbranchPath& b, const char* who) {
    if (b.size() != b.grid.size() || b.right.size() != b.size() || b.left.size() != b.size())
        throw ContractViolation(std::string(who) + ": branch arrays do not match its grid");
    if (b.size() < 5)
        throw ContractViolation(std::string(who) + ": need at least five samples");
}

}  // namespace

GWPhase aa_phase(const HamiltonianLoop& loop, const EigenbranchPath& branch) {
    if (!loop.hermitian(1e-10))
        throw ContractViolation("aa_phase: loop is not Hermitian");
    require_samples(branch, "aa_phase");
    require_cyclic(branch, "aa_phase");
    const double h = branch.grid.step();
    const auto dpsi =
        differentiate(std::span<const ComplexVector>(branch.right), h, periodic_samples(branch));
    std::vector<cplx> f(branch.size());
    double max_abs = 0.0;
    for (std::size_t k = 0; k < branch.size(); ++k) {
        const ComplexVector psi = branch.right[k] / branch.right[k].norm();
        f[k] = psi.dot(dpsi[k]) / branch.right[k].norm();
        max_abs = std::max(max_abs, std::abs(f[k]));
    }
    const cplx ret = branch.right.front().normalized().dot(branch.right.back().normalized());
    const cplx value = -kI * principal_log(ret) + kI * quadrature(f, branch.grid);
    return {value, max_abs, branch.size()};
}

GWPhase phase_naive(const EigenbranchPath& branch) {
    require_samples(branch, "phase_naive");
    require_cyclic(branch, "phase_naive");
    const double h = branch.grid.step();
    const auto dpsi =
        differentiate(std::span<const ComplexVector>(branch.right), h, periodic_samples(branch));
    std::vector<cplx> f(branch.size());
    double max_abs = 0.0;
    for (std::size_t k = 0; k < branch.size(); ++k) {
        const cplx ov = checked_overlap(branch.left[k], branch.right[k], kOverlapFloor, branch.grid[k]);
        f[k] = branch.left[k].dot(dpsi[k]) / ov;
        max_abs = std::max(max_abs, std::abs(f[k]));
    }
    return {kI * quadrature(f, branch.grid), max_abs, branch.size()};
}

GWPhase two_state_phase(const EigenbranchPath& branch) {
    require_samples(branch, "two_state_phase");
    const auto g = symmetric_integrand(branch);
    const cplx ratio = branch.left.front().dot(branch.right.back()) /
                       branch.left.back().dot(branch.right.front());
    const cplx value = -0.5 * kI * principal_log(ratio) + 0.5 * kI * quadrature(g.values, branch.grid);
    return {value, 0.5 * g.max_abs, branch.size()};
}

GWPhase phase_line_integral(const EigenbranchPath& branch) {
    require_cyclic(branch, "phase_line_integral");
    return two_state_phase(branch);
}

double im_phase_open_path(const EigenbranchPath& branch) {
    require_samples(branch, "im_phase_open_path");
    const auto g = symmetric_integrand(branch);
    const double accumulated = 0.5 * quadrature(g.values, branch.grid).real();
    auto log_ratio = [](const ComplexVector& psi, const ComplexVector& phi) {
        return std::log(psi.norm() / phi.norm());
    };
    const double endpoint = log_ratio(branch.right.back(), branch.left.back()) -
                            log_ratio(branch.right.front(), branch.left.front());
    return accumulated - 0.5 * endpoint;
}

cplx two_form_from_stencil(const StencilStates& s) {
    // Fix every neighbour to <phi|psi_x> = <phi_x|psi> = <phi|psi>. This removes
    // any rescaling of the stencil states exactly, not just to O(h^2).
    const cplx n = s.phi.dot(s.psi);
    auto right = [&](const ComplexVector& x) -> ComplexVector {
        const cplx ov = s.phi.dot(x);
        if (std::abs(ov) == 0.0)
            throw ExceptionalPoint("two_form: stencil state orthogonal to the centre", 0.0);
        return x * (n / ov);
    };
    auto left = [&](const ComplexVector& x) -> ComplexVector {
        const cplx ov = x.dot(s.psi);
        if (std::abs(ov) == 0.0)
            throw ExceptionalPoint("two_form: stencil state orthogonal to the centre", 0.0);
        return x * std::conj(n / ov);
    };
    const double inv = 1.0 / (2.0 * s.step);
    const ComplexVector dpsi_u = (right(s.psi_up) - right(s.psi_um)) * inv;
    const ComplexVector dpsi_v = (right(s.psi_vp) - right(s.psi_vm)) * inv;
    const ComplexVector dphi_u = (left(s.phi_up) - left(s.phi_um)) * inv;
    const ComplexVector dphi_v = (left(s.phi_vp) - left(s.phi_vm)) * inv;
    const cplx b_uv = dphi_v.dot(dpsi_u) / n - dphi_v.dot(s.psi) * s.phi.dot(dpsi_u) / (n * n);
    const cplx b_vu = dphi_u.dot(dpsi_v) / n - dphi_u.dot(s.psi) * s.phi.dot(dpsi_v) / (n * n);
    return kI * (b_uv - b_vu);
}

StencilStates surface_stencil(const ParameterSurface& surface, std::size_t index, double u, double v,
                              const BiorthoOptions& opt) {
    const auto centre = biorthogonal_decompose(surface.chart(u, v), opt);
    if (index >= centre.dim())
        throw ContractViolation("surface_stencil: branch index out of range");
    const cplx w = centre.eigenvalues[index];
    StencilStates s;
    s.step = surface.stencil_step;
    s.psi = centre.right[index];
    s.phi = centre.left[index];

    auto neighbour = [&](double uu, double vv, ComplexVector& psi, ComplexVector& phi) {
        const auto sys = biorthogonal_decompose(surface.chart(uu, vv), opt);
        std::size_t best = 0;
        for (std::size_t j = 1; j < sys.dim(); ++j)
            if (std::abs(sys.eigenvalues[j] - w) < std::abs(sys.eigenvalues[best] - w))
                best = j;
        const cplx ov = s.psi.dot(sys.right[best]);
        const cplx phase = std::abs(ov) > 0.0 ? std::conj(ov) / std::abs(ov) : cplx{1.0};
        psi = sys.right[best] * phase;
        phi = sys.left[best] * phase;
    };
    const double h = surface.stencil_step;
    neighbour(u + h, v, s.psi_up, s.phi_up);
    neighbour(u - h, v, s.psi_um, s.phi_um);
    neighbour(u, v + h, s.psi_vp, s.phi_vp);
    neighbour(u, v - h, s.psi_vm, s.phi_vm);
    return s;
}

cplx two_form(const ParameterSurface& surface, std::size_t index, double u, double v,
              const BiorthoOptions& opt) {
    return two_form_from_stencil(surface_stencil(surface, index, u, v, opt));
}

GWPhase phase_surface_integral(const ParameterSurface& surface, std::size_t index, unsigned threads,
                               const BiorthoOptions& opt) {
    if (surface.n_u < 1 || surface.n_v < 1 || !surface.chart)
        throw ContractViolation("phase_surface_integral: empty surface");
    const std::size_t rows = surface.n_v + 1;
    const std::size_t cols = surface.n_u + 1;
    const double du = 1.0 / static_cast<double>(surface.n_u);
    const double dv = 1.0 / static_cast<double>(surface.n_v);

    std::vector<cplx> row_sums(rows);
    std::vector<double> row_max(rows, 0.0);
    auto do_row = [&](std::size_t j) {
        const double v = static_cast<double>(j) * dv;
        cplx sum = 0.0;
        for (std::size_t i = 0; i < cols; ++i) {
            const double u = static_cast<double>(i) * du;
            const double w = (i == 0 || i + 1 == cols) ? 0.5 : 1.0;
            const cplx f = two_form(surface, index, u, v, opt);
            row_max[j] = std::max(row_max[j], std::abs(f));
            sum += w * f;
        }
        row_sums[j] = sum * du;
    };

    threads = std::max(1u, threads);
    if (threads == 1) {
        for (std::size_t j = 0; j < rows; ++j)
            do_row(j);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t j = t; j < rows; j += threads)
                        do_row(j);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool)
            th.join();
        for (auto& e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    cplx total = 0.0;
    for (std::size_t j = 0; j < rows; ++j)
        total += ((j == 0 || j + 1 == rows) ? 0.5 : 1.0) * row_sums[j];
    return {total * dv, *std::max_element(row_max.begin(), row_max.end()), rows * cols};
}

FrameLoop::FrameLoop(TimeGrid g, std::vector<ComplexMatrix> r, std::vector<ComplexMatrix> l)
    : grid(g), right(std::move(r)), left(std::move(l)) {
    if (right.size() != grid.size() || left.size() != grid.size())
        throw ContractViolation("FrameLoop: one frame per grid sample required");
    for (std::size_t k = 0; k < right.size(); ++k)
        if (right[k].rows() != right.front().rows() || right[k].cols() != right.front().cols() ||
            left[k].rows() != right[k].rows() || left[k].cols() != right[k].cols())
            throw ContractViolation("FrameLoop: inconsistent frame shapes");
}

FrameLoop frame_from_branches(const std::vector<EigenbranchPath>& branches) {
    if (branches.empty())
        throw ContractViolation("frame_from_branches: no branches");
    const auto& grid = branches.front().grid;
    const auto ns = branches.front().size();
    const auto n = branches.front().right.front().size();
    const auto m = static_cast<Eigen::Index>(branches.size());
    std::vector<ComplexMatrix> r(ns, ComplexMatrix(n, m)), l(ns, ComplexMatrix(n, m));
    for (Eigen::Index j = 0; j < m; ++j) {
        const auto& b = branches[static_cast<std::size_t>(j)];
        if (b.size() != ns)
            throw ContractViolation("frame_from_branches: branches sampled differently");
        for (std::size_t k = 0; k < ns; ++k) {
            r[k].col(j) = b.right[k];
            l[k].col(j) = b.left[k];
        }
    }
    return FrameLoop(grid, std::move(r), std::move(l));
}

ComplexMatrix nonabelian_holonomy(const FrameLoop& frames) {
    const auto m = static_cast<Eigen::Index>(frames.rank());
    const double dt = frames.grid.step();
    auto check_overlaps = [m](const ComplexMatrix& l, const ComplexMatrix& r) {
        const ComplexMatrix gram = l.adjoint() * r;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double normalized = std::abs(gram(i, i)) / (l.col(i).norm() * r.col(i).norm());
            if (!(normalized >= kOverlapFloor))
                throw ExceptionalPoint("nonabelian_holonomy: frame overlap underflow", normalized);
        }
    };
    for (std::size_t k = 0; k < frames.grid.size(); ++k)
        check_overlaps(frames.left[k], frames.right[k]);
    ComplexMatrix hol = ComplexMatrix::Identity(m, m);
    for (std::size_t k = 0; k + 1 < frames.grid.size(); ++k) {
        const ComplexMatrix s_mid = 0.5 * (frames.right[k] + frames.right[k + 1]);
        const ComplexMatrix l_mid = 0.5 * (frames.left[k] + frames.left[k + 1]);
        const ComplexMatrix ds = (frames.right[k + 1] - frames.right[k]) / dt;
        // Gram matrix <phi_i|psi_j>; diagonal for a biorthogonal frame.
        const ComplexMatrix gram = l_mid.adjoint() * s_mid;
        check_overlaps(l_mid, s_mid);
        // Symmetric normalization G^-1/2 (.) G^-1/2 keeps A exactly Hermitian
        // for an orthonormal frame; it agrees with G^-1 (.) to second order.
        const ComplexMatrix root_inv = gram.sqrt().inverse();
        const ComplexMatrix a = kI * root_inv * (l_mid.adjoint() * ds) * root_inv;
        hol = expm(kI * a * dt) * hol;
    }
    return hol;
}

ComplexMatrix nonabelian_holonomy(const HamiltonianLoop& loop, const TrackOptions& opt) {
    const auto branches = track_branches(loop, opt);
    for (const auto& b : branches)
        require_cyclic(b, "nonabelian_holonomy");
    return nonabelian_holonomy(frame_from_branches(branches));
}

ComplexMatrix holonomy_operator(const FrameLoop& frames, const ComplexMatrix& holonomy) {
    const ComplexMatrix& s0 = frames.right.front();
    const ComplexMatrix& l0 = frames.left.front();
    const ComplexMatrix gram = l0.adjoint() * s0;
    return s0 * holonomy * gram.partialPivLu().solve(l0.adjoint());
}

}  // namespace gwphase
