#include "gwphase/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gwphase/errors.hpp"

namespace gwphase {

namespace {

void require_samples(std::size_t samples, const char* who) {
    if (samples < 5)
        throw ContractViolation(std::string(who) + ": need at least 5 samples");
}

void check_cone(const ComplexCone& cone, const BiorthoOptions& opt = {}) {
    if (!(cone.period > 0.0) || !std::isfinite(cone.period))
        throw ContractViolation("complex cone: period must be positive");
    if (cone.handedness != 1 && cone.handedness != -1)
        throw ContractViolation("complex cone: handedness must be +1 or -1");
    if (std::abs(cone.field) == 0.0)
        throw NearDegeneracy("complex cone: zero field makes the levels degenerate");
    // Both branches have normalized left/right overlap 1 / cosh(Im Theta).
    const double overlap = 1.0 / std::cosh(cone.polar.imag());
    if (overlap < opt.exceptional_floor)
        throw ExceptionalPoint("complex cone: eigenvectors too close to coalescence", overlap);
}

// Right eigenvectors of the cone at polar scale v and azimuth s: columns are
// the +b/2 and -b/2 branches.
ComplexMatrix cone_frame(const ComplexCone& cone, double v, double s) {
    const cplx half = 0.5 * v * cone.polar;
    const cplx e = std::exp(kI * s);
    ComplexMatrix f(2, 2);
    f << std::cos(half), -std::sin(half), e * std::sin(half), e * std::cos(half);
    return f;
}

ComplexMatrix rotation(double a) {
    ComplexMatrix r(2, 2);
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return r;
}

ComplexVector unit(const ComplexVector& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw ContractViolation("Jones vector must be finite and nonzero");
    return v / n;
}

struct Mode {
    ComplexVector psi;
    ComplexVector phi;
    cplx value;
};

Mode tracked_mode(const JonesSegment& seg, const ComplexVector& probe, const BiorthoOptions& opt) {
    if (seg.is_vacuum())
        return {probe, probe, cplx{0.0, 0.0}};
    const auto sys = biorthogonal_decompose(seg.generator, opt);
    std::size_t best = 0;
    double best_overlap = -1.0, second = -1.0;
    for (std::size_t j = 0; j < sys.dim(); ++j) {
        const double o = std::abs(probe.dot(sys.right[j]));
        if (o > best_overlap) {
            second = best_overlap;
            best_overlap = o;
            best = j;
        } else if (o > second) {
            second = o;
        }
    }
    if (best_overlap - second <= 1e-9)
        throw BranchCollision("Jones sequence: probe couples equally to two eigenmodes of '" +
                              seg.label + "'");
    return {sys.right[best], sys.left[best], sys.eigenvalues[best]};
}

void check_jones(const std::vector<JonesSegment>& segments) {
    for (const auto& s : segments) {
        if (s.generator.rows() != 2 || s.generator.cols() != 2)
            throw ContractViolation("Jones segment generator must be 2x2");
        if (!(s.length >= 0.0) || !std::isfinite(s.length) || !all_finite(s.generator))
            throw ContractViolation("Jones segment must have finite generator and length >= 0");
    }
}

double cyclic_overlap(const std::vector<JonesSegment>& segments, const ComplexVector& e) {
    const ComplexVector out = propagate_sequence(segments, e);
    const double n = out.norm();
    if (!(n > 0.0))
        return 0.0;
    return std::abs(e.dot(out)) / n;
}

}  // namespace

// ---------------------------------------------------------------------------

ComplexMatrix cone_hamiltonian(const ComplexCone& cone, double polar_scale, double azimuth) {
    const cplx th = polar_scale * cone.polar;
    const cplx c = std::cos(th), s = std::sin(th);
    ComplexMatrix h(2, 2);
    h << c, s * std::exp(-kI * azimuth), s * std::exp(kI * azimuth), -c;
    return 0.5 * cone.field * h;
}

HamiltonianLoop cone_loop(const ComplexCone& cone, std::size_t samples) {
    if (samples < 100)
        throw ContractViolation("cone_loop: need at least 100 samples");
    check_cone(cone);
    TimeGrid grid(0.0, cone.period, samples);
    std::vector<ComplexMatrix> hs;
    hs.reserve(samples);
    for (std::size_t k = 0; k < samples; ++k)
        hs.push_back(cone_hamiltonian(cone, 1.0, cone.handedness * 2.0 * kPi * grid[k] / cone.period));
    hs.back() = hs.front();
    return HamiltonianLoop(grid, std::move(hs));
}

std::size_t cone_upper_index(const ComplexCone& cone) {
    const cplx b = cone.field;
    return (b.real() > 0.0 || (b.real() == 0.0 && b.imag() > 0.0)) ? 1 : 0;
}

cplx cone_expected_phase(const ComplexCone& cone) {
    return -static_cast<double>(cone.handedness) * kPi * (1.0 - std::cos(cone.polar));
}

ParameterSurface cone_surface(const ComplexCone& cone, std::size_t n_u, std::size_t n_v) {
    check_cone(cone);
    if (n_u < 2 || n_v < 2)
        throw ContractViolation("cone_surface: need at least 2 intervals per direction");
    ParameterSurface s;
    s.chart = [cone](double u, double v) {
        return cone_hamiltonian(cone, v, cone.handedness * 2.0 * kPi * u);
    };
    s.n_u = n_u;
    s.n_v = n_v;
    return s;
}

CommonOmegaLoop common_omega_loop(const ComplexCone& cone, cplx omega, cplx split,
                                  std::size_t samples) {
    require_samples(samples, "common_omega_loop");
    check_cone(cone);
    TimeGrid grid(0.0, cone.period, samples);
    std::vector<ComplexMatrix> hs, rights, lefts;
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = omega + 0.5 * split;
    d(1, 1) = omega - 0.5 * split;
    for (std::size_t k = 0; k < samples; ++k) {
        const double s = cone.handedness * 2.0 * kPi * grid[k] / cone.period;
        const ComplexMatrix f = cone_frame(cone, 1.0, s);
        const ComplexMatrix inv = f.inverse();
        hs.push_back(f * d * inv);
        rights.push_back(f);
        lefts.push_back(inv.adjoint());
    }
    hs.back() = hs.front();
    rights.back() = rights.front();
    lefts.back() = lefts.front();
    return {HamiltonianLoop(grid, std::move(hs)), FrameLoop(grid, std::move(rights), std::move(lefts))};
}

CommonOmegaLoop degenerate_doublet_loop(double polar, double omega, double gap, double period,
                                        std::size_t samples) {
    require_samples(samples, "degenerate_doublet_loop");
    if (!(period > 0.0))
        throw ContractViolation("degenerate_doublet_loop: period must be positive");
    if (gap == 0.0)
        throw NearDegeneracy("degenerate_doublet_loop: zero gap merges all three levels");
    TimeGrid grid(0.0, period, samples);
    std::vector<ComplexMatrix> hs, frames;
    const Eigen::Matrix3d ry = Eigen::AngleAxisd(polar, Eigen::Vector3d::UnitY()).toRotationMatrix();
    for (std::size_t k = 0; k < samples; ++k) {
        const double a = 2.0 * kPi * grid[k] / period;
        const Eigen::Matrix3d rz = Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()).toRotationMatrix();
        const Eigen::Matrix3d r = rz * ry * rz.transpose();
        const Eigen::Vector3d n = r.col(2);
        const Eigen::Matrix3d h = omega * Eigen::Matrix3d::Identity() + gap * n * n.transpose();
        hs.push_back(h.cast<cplx>());
        frames.push_back(r.leftCols(2).cast<cplx>());
    }
    hs.back() = hs.front();
    frames.back() = frames.front();
    auto lefts = frames;
    return {HamiltonianLoop(grid, std::move(hs)), FrameLoop(grid, std::move(frames), std::move(lefts))};
}

// ---------------------------------------------------------------------------

ComplexMatrix JonesSegment::transfer() const { return expm(-kI * length * generator); }

bool JonesSegment::is_vacuum() const { return generator.isZero(0.0); }

JonesSegment vacuum(double length) {
    JonesSegment s;
    s.length = length;
    s.label = "vacuum";
    return s;
}

ComplexMatrix rotate_generator(const ComplexMatrix& n, double angle) {
    if (n.rows() != 2 || n.cols() != 2)
        throw ContractViolation("rotate_generator: generator must be 2x2");
    const ComplexMatrix r = rotation(angle);
    return r * n * r.transpose();
}

JonesSegment linear_dichroic(double kappa, double length, double angle, std::string label) {
    ComplexMatrix n = ComplexMatrix::Zero(2, 2);
    n(1, 1) = -kI * kappa;
    JonesSegment s;
    s.generator = rotate_generator(n, angle);
    s.length = length;
    s.label = std::move(label);
    return s;
}

ComplexMatrix sequence_transfer(const std::vector<JonesSegment>& segments) {
    check_jones(segments);
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    for (const auto& s : segments)
        m = s.transfer() * m;
    return m;
}

ComplexVector propagate_sequence(const std::vector<JonesSegment>& segments, const ComplexVector& input) {
    if (input.size() != 2)
        throw ContractViolation("propagate_sequence: input must be a 2-component Jones vector");
    check_jones(segments);
    ComplexVector v = input;
    for (const auto& s : segments)
        v = s.transfer() * v;
    return v;
}

ComplexVector cycle_eigenpolarization(const std::vector<JonesSegment>& segments) {
    const auto pairs = eig_dense(sequence_transfer(segments));
    const auto best = std::max_element(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        return std::abs(a.value) < std::abs(b.value);
    });
    return best->vector;
}

cplx mode_following_amplitude(const std::vector<JonesSegment>& segments, const ComplexVector& probe,
                              const BiorthoOptions& opt) {
    if (probe.size() != 2)
        throw ContractViolation("mode_following_amplitude: probe must be a 2-component Jones vector");
    check_jones(segments);
    const ComplexVector e = unit(probe);
    ComplexVector prev = e;
    cplx amp{1.0, 0.0};
    for (const auto& s : segments) {
        const Mode m = tracked_mode(s, e, opt);
        amp *= m.phi.dot(prev) / m.phi.dot(m.psi);
        amp *= std::exp(-kI * m.value * s.length);
        prev = m.psi;
    }
    return amp * e.dot(prev);
}

GWPhase sequence_phase_extract(const std::vector<JonesSegment>& entangled,
                               const std::vector<JonesSegment>& reference, const ComplexVector& probe,
                               const BiorthoOptions& opt) {
    if (probe.size() != 2)
        throw ContractViolation("sequence_phase_extract: probe must be a 2-component Jones vector");
    check_jones(entangled);
    check_jones(reference);

    std::vector<bool> used(reference.size(), false);
    for (const auto& s : entangled) {
        if (s.is_vacuum())
            continue;
        bool found = false;
        for (std::size_t j = 0; j < reference.size() && !found; ++j) {
            const auto& r = reference[j];
            if (used[j] || r.is_vacuum())
                continue;
            const double scale = 1.0 + s.generator.norm();
            if ((r.generator - s.generator).norm() <= 1e-12 * scale &&
                std::abs(r.length - s.length) <= 1e-12 * (1.0 + s.length)) {
                used[j] = true;
                found = true;
            }
        }
        if (!found)
            throw ContractViolation("sequence_phase_extract: crystal '" + s.label +
                                    "' has no identical partner in the reference sequence");
    }
    for (std::size_t j = 0; j < reference.size(); ++j)
        if (!used[j] && !reference[j].is_vacuum())
            throw ContractViolation("sequence_phase_extract: reference has an unmatched crystal");

    const ComplexVector e = unit(probe);
    for (const auto* seq : {&entangled, &reference}) {
        const double o = cyclic_overlap(*seq, e);
        if (o < 1.0 - 1e-9)
            throw NonCyclic("sequence_phase_extract: probe is not an eigenpolarization of the sequence", o);
    }

    const cplx a_ent = mode_following_amplitude(entangled, e, opt);
    const cplx a_ref = mode_following_amplitude(reference, e, opt);
    if (std::abs(a_ref) == 0.0 || std::abs(a_ent) == 0.0)
        throw NonCyclic("sequence_phase_extract: tracked amplitude vanishes", 0.0);

    GWPhase p;
    p.value = -kI * principal_log(a_ent / a_ref);
    p.grid_size = entangled.size();
    return p;
}

HamiltonianLoop helical_fiber_loop(const ComplexMatrix& generator, double total_length,
                                   std::size_t samples) {
    require_samples(samples, "helical_fiber_loop");
    if (!(total_length > 0.0))
        throw ContractViolation("helical_fiber_loop: length must be positive");
    TimeGrid grid(0.0, total_length, samples);
    std::vector<ComplexMatrix> hs;
    for (std::size_t k = 0; k < samples; ++k)
        hs.push_back(rotate_generator(generator, 2.0 * kPi * grid[k] / total_length));
    hs.back() = hs.front();
    return HamiltonianLoop(grid, std::move(hs));
}

// ---------------------------------------------------------------------------

cplx effective_moment(const ACModel& model, std::size_t branch, const BiorthoOptions& opt) {
    const auto& h = model.internal_hamiltonian;
    if (h.rows() == 0 || h.rows() != h.cols() || model.moment.rows() != h.rows() ||
        model.moment.cols() != h.cols())
        throw ContractViolation("effective_moment: internal Hamiltonian and moment must be square and match");
    const auto sys = biorthogonal_decompose(h, opt);
    if (branch >= sys.dim())
        throw ContractViolation("effective_moment: branch index out of range");
    return sys.left[branch].dot(model.moment * sys.right[branch]) / sys.left[branch].dot(sys.right[branch]);
}

Winding winding_number(const PlanarPath& path) {
    const auto& v = path.vertices;
    if (v.size() < 2)
        throw ContractViolation("winding_number: need at least two vertices");
    std::vector<Eigen::Vector2d> xy;
    for (const auto& p : v) {
        if (!(p.r > 0.0) || !std::isfinite(p.r) || !std::isfinite(p.theta))
            throw ContractViolation("winding_number: vertex at or through the charged line");
        xy.emplace_back(p.r * std::cos(p.theta), p.r * std::sin(p.theta));
    }
    if (path.closed && (xy.back() - xy.front()).norm() > 1e-12 * xy.front().norm())
        xy.push_back(xy.front());

    double net = 0.0;
    for (std::size_t k = 0; k + 1 < xy.size(); ++k) {
        const auto& a = xy[k];
        const auto& b = xy[k + 1];
        const double d = std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
        if (std::abs(d) >= kPi - 1e-12)
            throw ContractViolation("winding_number: angular increment of pi or more is ambiguous");
        net += d;
    }

    Winding w;
    w.net_angle = net;
    w.theta_start = wrap_angle(v.front().theta);
    w.theta_end = path.closed ? w.theta_start : wrap_angle(v.back().theta);
    w.turns = std::lround((net - (w.theta_end - w.theta_start)) / (2.0 * kPi));
    return w;
}

TopologicalFactor topological_factor(cplx moment, double charge_density, const PlanarPath& path) {
    const Winding w = winding_number(path);
    const cplx k = moment * charge_density;
    return {std::exp(kI * k * (w.theta_end - w.theta_start)),
            std::exp(kI * k * static_cast<double>(w.turns))};
}

GWPhase ac_geometric_phase(const ACModel& model, const PlanarPath& path, std::size_t branch,
                           const BiorthoOptions& opt) {
    if (!path.closed)
        throw ContractViolation("ac_geometric_phase: path must be closed");
    const Winding w = winding_number(path);
    GWPhase p;
    p.value = static_cast<double>(w.turns) * effective_moment(model, branch, opt) * model.charge_density;
    p.grid_size = path.vertices.size();
    return p;
}

NeglectedTerms neglected_terms(const ACModel& model, std::size_t branch, double potential,
                               double momentum, double mass, const BiorthoOptions& opt) {
    if (!(mass > 0.0))
        throw ContractViolation("neglected_terms: mass must be positive");
    const cplx mu_i = effective_moment(model, branch, opt);
    const auto sys = biorthogonal_decompose(model.internal_hamiltonian, opt);
    const ComplexMatrix mu2 = model.moment * model.moment;
    const auto& psi = sys.right[branch];
    const cplx mu2_i = sys.left[branch].dot(mu2 * psi) / sys.left[branch].dot(psi);

    const double a = std::abs(potential), p = std::abs(momentum);
    NeglectedTerms t{};
    t.quadratic = a * a / (2.0 * mass) * std::abs(mu2_i - mu_i * mu_i);
    for (std::size_t j = 0; j < sys.dim(); ++j) {
        if (j == branch)
            continue;
        const cplx norm = sys.left[j].dot(sys.right[j]);
        t.interbranch_ap = std::max(t.interbranch_ap,
                                    std::abs(sys.left[j].dot(model.moment * psi) / norm) * a * p / mass);
        t.interbranch_a2 = std::max(t.interbranch_a2,
                                    std::abs(sys.left[j].dot(mu2 * psi) / norm) * a * a / (2.0 * mass));
    }
    return t;
}

}  // namespace gwphase
