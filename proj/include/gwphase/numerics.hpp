#pragma once

// Dense complex linear algebra, fixed-step ODE integration and quadrature.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gwphase {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Uniform grid of sample times t0 = s_0 < s_1 < ... < s_{n-1} = t1.
class TimeGrid {
public:
    TimeGrid(double t0, double t1, std::size_t n_samples);

    double t0() const { return t0_; }
    double t1() const { return t1_; }
    std::size_t size() const { return n_; }
    std::size_t intervals() const { return n_ - 1; }
    double step() const { return (t1_ - t0_) / static_cast<double>(n_ - 1); }
    double duration() const { return t1_ - t0_; }

    /// Sample k; the last sample is exactly t1.
    double operator[](std::size_t k) const;
    std::vector<double> samples() const;

private:
    double t0_;
    double t1_;
    std::size_t n_;
};

struct EigenPair {
    cplx value;
    ComplexVector vector;  // unit norm
};

/// Eigenpairs of a dense complex matrix, sorted by (Re, Im).
///
/// Dimensions 1 and 2 use the characteristic polynomial directly; larger
/// matrices go through a Schur reduction. Every pair is checked against
/// ||M v - lambda v|| <= tol * ||M|| and a SolverFailure carrying the worst
/// residual is thrown otherwise.
std::vector<EigenPair> eig_dense(const ComplexMatrix& m, double tol = 1e-10);

/// Frobenius-norm residual ||M v - lambda v|| / max(||M||, tiny).
double eig_residual(const ComplexMatrix& m, const EigenPair& pair);

using OdeRhs = std::function<ComplexVector(double, const ComplexVector&)>;

/// Classic RK4 over every interval of the grid. Throws BlowUp naming the
/// failing time as soon as the state stops being finite.
ComplexVector integrate_ode(const OdeRhs& rhs, const ComplexVector& y0, const TimeGrid& grid);

/// Composite trapezoid rule over the grid.
cplx quadrature(std::span<const cplx> samples, const TimeGrid& grid);

/// Fourth-order finite-difference derivative of sampled vectors on a uniform
/// grid. With `periodic`, the first and last samples are the same point and
/// central stencils wrap around; otherwise one-sided stencils are used at the
/// two ends. Needs at least five samples.
std::vector<ComplexVector> differentiate(std::span<const ComplexVector> values, double step,
                                         bool periodic);
std::vector<cplx> differentiate(std::span<const cplx> values, double step, bool periodic);

/// exp(M) for a small dense matrix.
ComplexMatrix expm(const ComplexMatrix& m);

bool all_finite(const ComplexMatrix& m);

/// Principal-branch complex logarithm with Im in (-pi, pi].
cplx principal_log(cplx z);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

}  // namespace gwphase
