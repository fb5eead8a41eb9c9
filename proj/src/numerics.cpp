#include "gwphase/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "gwphase/errors.hpp"

namespace gwphase {

TimeGrid::TimeGrid(double t0, double t1, std::size_t n_samples) : t0_(t0), t1_(t1), n_(n_samples) {
    if (n_samples < 2)
        throw ContractViolation("TimeGrid: need at least two samples");
    if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1))
        throw ContractViolation("TimeGrid: need finite t0 < t1");
}

double TimeGrid::operator[](std::size_t k) const {
    if (k + 1 == n_)
        return t1_;
    return t0_ + static_cast<double>(k) * step();
}

std::vector<double> TimeGrid::samples() const {
    std::vector<double> out(n_);
    for (std::size_t k = 0; k < n_; ++k)
        out[k] = (*this)[k];
    return out;
}

namespace {

bool eig_less(const EigenPair& a, const EigenPair& b) {
    if (a.value.real() != b.value.real())
        return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
}

std::vector<EigenPair> eig_2x2(const ComplexMatrix& m) {
    const cplx a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    const cplx mean = 0.5 * (a + d);
    const cplx half_diff = 0.5 * (a - d);
    const cplx root = std::sqrt(half_diff * half_diff + b * c);

    std::vector<EigenPair> out;
    for (cplx lambda : {mean + root, mean - root}) {
        // Two candidate null vectors of (M - lambda); keep the better conditioned one.
        ComplexVector v1(2), v2(2);
        v1 << b, lambda - a;
        v2 << lambda - d, c;
        ComplexVector v = v1.norm() >= v2.norm() ? v1 : v2;
        if (v.norm() == 0.0) {
            // M is a multiple of the identity.
            v = ComplexVector::Zero(2);
            v(out.empty() ? 0 : 1) = 1.0;
        }
        out.push_back({lambda, v.normalized()});
    }
    return out;
}

}  // namespace

double eig_residual(const ComplexMatrix& m, const EigenPair& pair) {
    const double scale = std::max(m.norm(), std::numeric_limits<double>::min());
    return (m * pair.vector - pair.value * pair.vector).norm() / (scale * pair.vector.norm());
}

std::vector<EigenPair> eig_dense(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw ContractViolation("eig_dense: matrix must be square and non-empty");
    if (m.rows() > 1024)
        throw ContractViolation("eig_dense: dimension above 1024");
    if (!all_finite(m))
        throw ContractViolation("eig_dense: non-finite entries");

    std::vector<EigenPair> pairs;
    const auto n = m.rows();
    if (n == 1) {
        pairs.push_back({m(0, 0), ComplexVector::Ones(1)});
    } else if (n == 2) {
        pairs = eig_2x2(m);
    } else {
        Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, true);
        if (solver.info() != Eigen::Success)
            throw SolverFailure("eig_dense: Schur reduction did not converge", NAN);
        for (Eigen::Index k = 0; k < n; ++k)
            pairs.push_back({solver.eigenvalues()(k), solver.eigenvectors().col(k).normalized()});
    }

    double worst = 0.0;
    for (const auto& p : pairs)
        worst = std::max(worst, eig_residual(m, p));
    if (!(worst <= tol)) {
        std::ostringstream msg;
        msg << "eig_dense: residual " << worst << " above tolerance " << tol;
        throw SolverFailure(msg.str(), worst);
    }
    std::sort(pairs.begin(), pairs.end(), eig_less);
    return pairs;
}

bool all_finite(const ComplexMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
                return false;
    return true;
}

ComplexVector integrate_ode(const OdeRhs& rhs, const ComplexVector& y0, const TimeGrid& grid) {
    ComplexVector y = y0;
    const double h = grid.step();
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double t = grid[k];
        const ComplexVector k1 = rhs(t, y);
        const ComplexVector k2 = rhs(t + 0.5 * h, y + (0.5 * h) * k1);
        const ComplexVector k3 = rhs(t + 0.5 * h, y + (0.5 * h) * k2);
        const ComplexVector k4 = rhs(t + h, y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!all_finite(y)) {
            std::ostringstream msg;
            msg << "integrate_ode: state blew up at t = " << grid[k + 1];
            throw BlowUp(msg.str(), grid[k + 1]);
        }
    }
    return y;
}

cplx quadrature(std::span<const cplx> samples, const TimeGrid& grid) {
    if (samples.size() != grid.size())
        throw ContractViolation("quadrature: sample count does not match grid");
    cplx sum = 0.5 * (samples.front() + samples.back());
    for (std::size_t k = 1; k + 1 < samples.size(); ++k)
        sum += samples[k];
    return sum * grid.step();
}

namespace {

template <class T>
std::vector<T> differentiate_impl(std::span<const T> f, double h, bool periodic) {
    const std::size_t n = f.size();
    if (n < 5)
        throw ContractViolation("differentiate: need at least five samples");
    std::vector<T> d(n);
    const double w = 1.0 / (12.0 * h);
    if (periodic) {
        const std::size_t p = n - 1;  // f[n-1] is f[0]
        auto at = [&](std::ptrdiff_t k) -> const T& {
            const auto pp = static_cast<std::ptrdiff_t>(p);
            return f[static_cast<std::size_t>(((k % pp) + pp) % pp)];
        };
        for (std::size_t k = 0; k < p; ++k) {
            const auto kk = static_cast<std::ptrdiff_t>(k);
            d[k] = w * (at(kk - 2) - 8.0 * at(kk - 1) + 8.0 * at(kk + 1) - at(kk + 2));
        }
        d[p] = d[0];
        return d;
    }
    d[0] = w * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    d[1] = w * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for (std::size_t k = 2; k + 2 < n; ++k)
        d[k] = w * (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]);
    const std::size_t e = n - 1;
    d[e] = -w * (-25.0 * f[e] + 48.0 * f[e - 1] - 36.0 * f[e - 2] + 16.0 * f[e - 3] - 3.0 * f[e - 4]);
    d[e - 1] = -w * (-3.0 * f[e] - 10.0 * f[e - 1] + 18.0 * f[e - 2] - 6.0 * f[e - 3] + f[e - 4]);
    return d;
}

}  // namespace

std::vector<ComplexVector> differentiate(std::span<const ComplexVector> values, double step,
                                         bool periodic) {
    return differentiate_impl<ComplexVector>(values, step, periodic);
}

std::vector<cplx> differentiate(std::span<const cplx> values, double step, bool periodic) {
    return differentiate_impl<cplx>(values, step, periodic);
}

ComplexMatrix expm(const ComplexMatrix& m) {
    return m.exp();
}

cplx principal_log(cplx z) {
    return {std::log(std::abs(z)), std::arg(z)};
}

double wrap_angle(double a) {
    double r = std::remainder(a, 2.0 * kPi);
    if (r <= -kPi)
        r += 2.0 * kPi;
    return r;
}

}  // namespace gwphase
