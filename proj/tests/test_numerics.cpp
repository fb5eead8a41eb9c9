#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gwphase/errors.hpp"
#include "gwphase/numerics.hpp"
#include "support.hpp"

using namespace gwphase;

TEST_CASE("time grid endpoints and spacing") {
    TimeGrid g(0.0, 1.7, 101);
    CHECK(g[0] == 0.0);
    CHECK(g[100] == 1.7);
    for (std::size_t k = 1; k < g.size(); ++k)
        CHECK(std::abs((g[k] - g[k - 1]) - g.step()) < 1e-12 * g.step());
    CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 1), ContractViolation);
    CHECK_THROWS_AS(TimeGrid(1.0, 1.0, 5), ContractViolation);
}

TEST_CASE("eig_dense diagonal matrix") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = cplx(2.0, -0.5);
    const auto pairs = eig_dense(m);
    REQUIRE(pairs.size() == 2);
    CHECK(std::abs(pairs[0].value - 1.0) < 1e-14);
    CHECK(std::abs(pairs[1].value - cplx(2.0, -0.5)) < 1e-14);
    CHECK(std::abs(std::abs(pairs[0].vector(0)) - 1.0) < 1e-14);
    CHECK(std::abs(std::abs(pairs[1].vector(1)) - 1.0) < 1e-14);
}

TEST_CASE("eig_dense companion matrix gives polynomial roots") {
    const cplx c0(0.3, -0.2), c1(-1.1, 0.4);
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, -c0, -c1;
    for (const auto& p : eig_dense(m))
        CHECK(std::abs(p.value * p.value + c1 * p.value + c0) < 1e-13);
}

TEST_CASE("eig_dense residuals, ordering and unit vectors") {
    std::mt19937 rng(7);
    for (int n : {1, 2, 3, 8, 40}) {
        const ComplexMatrix m = testsupport::random_matrix(rng, n);
        const auto pairs = eig_dense(m);
        REQUIRE(pairs.size() == static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            CHECK(eig_residual(m, pairs[i]) < 1e-10);
            CHECK(std::abs(pairs[i].vector.norm() - 1.0) < 1e-12);
            if (i > 0) {
                const cplx a = pairs[i - 1].value, b = pairs[i].value;
                CHECK((a.real() < b.real() || (a.real() == b.real() && a.imag() <= b.imag())));
            }
        }
    }
}

TEST_CASE("eig_dense spectrum is invariant under similarity") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 5;
        const ComplexMatrix m = testsupport::random_matrix(rng, n);
        const ComplexMatrix p =
            ComplexMatrix::Identity(n, n) + testsupport::random_matrix(rng, n, 0.2 / n);
        const auto a = eig_dense(m);
        const auto b = eig_dense(p * m * p.inverse());
        for (const auto& x : a) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& y : b)
                best = std::min(best, std::abs(x.value - y.value));
            CHECK(best < 1e-8);
        }
    }
}

TEST_CASE("eig_dense rejects bad input") {
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eig_dense(m), ContractViolation);
    CHECK_THROWS_AS(eig_dense(ComplexMatrix(2, 3)), ContractViolation);
}

TEST_CASE("integrate_ode scalar rotation and decay") {
    const OdeRhs rot = [](double, const ComplexVector& y) -> ComplexVector { return -kI * y; };
    const ComplexVector y0 = ComplexVector::Ones(1);
    CHECK(std::abs(integrate_ode(rot, y0, TimeGrid(0.0, kPi, 1001))(0) + 1.0) < 1e-8);

    const double gamma = 0.7;
    const OdeRhs decay = [gamma](double, const ComplexVector& y) -> ComplexVector { return -gamma * y; };
    CHECK(std::abs(std::abs(integrate_ode(decay, y0, TimeGrid(0.0, 3.0, 1001))(0)) -
                   std::exp(-gamma * 3.0)) < 1e-8);
}

TEST_CASE("integrate_ode matches the matrix exponential and converges at fourth order") {
    std::mt19937 rng(3);
    const ComplexMatrix h = testsupport::random_matrix(rng, 2, 0.8);
    const OdeRhs rhs = [&h](double, const ComplexVector& y) -> ComplexVector { return -kI * (h * y); };
    ComplexVector y0(2);
    y0 << 0.6, cplx(0.0, 0.8);
    const double t = 2.0;
    const ComplexVector exact = expm(-kI * t * h) * y0;
    CHECK((integrate_ode(rhs, y0, TimeGrid(0.0, t, 2001)) - exact).norm() < 1e-8);

    const double e1 = (integrate_ode(rhs, y0, TimeGrid(0.0, t, 41)) - exact).norm();
    const double e2 = (integrate_ode(rhs, y0, TimeGrid(0.0, t, 81)) - exact).norm();
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
}

TEST_CASE("integrate_ode preserves the norm under Hermitian generators") {
    std::mt19937 rng(5);
    ComplexMatrix a = testsupport::random_matrix(rng, 3);
    const ComplexMatrix h = a + a.adjoint();
    const OdeRhs rhs = [&h](double t, const ComplexVector& y) -> ComplexVector {
        return -kI * std::cos(t) * (h * y);
    };
    ComplexVector y0 = ComplexVector::Unit(3, 1);
    const ComplexVector y = integrate_ode(rhs, y0, TimeGrid(0.0, 1.0, 1001));
    CHECK(std::abs(y.norm() - 1.0) < 1e-8);
}

TEST_CASE("integrate_ode reports blow-up time") {
    const OdeRhs rhs = [](double t, const ComplexVector& y) -> ComplexVector {
        return t > 0.5 ? ComplexVector::Constant(1, std::numeric_limits<double>::infinity()) : y;
    };
    try {
        integrate_ode(rhs, ComplexVector::Ones(1), TimeGrid(0.0, 1.0, 11));
        FAIL("expected blow-up");
    } catch (const BlowUp& e) {
        CHECK(e.time() > 0.4);
        CHECK(e.time() <= 0.6 + 1e-12);
    }
}

TEST_CASE("quadrature reference integrals") {
    const TimeGrid unit(0.0, 1.0, 11);
    CHECK(std::abs(quadrature(std::vector<cplx>(11, cplx(2.0, -1.0)), unit) - cplx(2.0, -1.0)) < 1e-15);

    const TimeGrid half(0.0, kPi, 2001);
    std::vector<cplx> s;
    for (double t : half.samples())
        s.emplace_back(std::sin(t));
    CHECK(std::abs(quadrature(s, half) - 2.0) < 1e-5);

    const TimeGrid full(0.0, 2.0 * kPi, 2001);
    s.clear();
    for (double t : full.samples())
        s.push_back(std::exp(kI * t));
    CHECK(std::abs(quadrature(s, full)) < 1e-5);

    const TimeGrid g(-1.0, 2.0, 7);
    s.clear();
    for (double t : g.samples())
        s.push_back(cplx(3.0 * t - 1.0, 0.5 * t));
    CHECK(std::abs(quadrature(s, g) - cplx(1.5, 0.75)) < 1e-14);

    CHECK_THROWS_AS(quadrature(std::vector<cplx>(5), unit), ContractViolation);
}

TEST_CASE("differentiate is fourth-order periodic and exact on quartics at open ends") {
    for (std::size_t n : {65u, 129u}) {
        const TimeGrid g(0.0, 2.0 * kPi, n);
        std::vector<cplx> f;
        for (double t : g.samples())
            f.push_back(std::exp(kI * std::sin(t)));
        const auto d = differentiate(f, g.step(), true);
        double err = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            err = std::max(err, std::abs(d[k] - kI * std::cos(g[k]) * f[k]));
        CHECK(err < (n == 65 ? 1e-4 : 1e-5));
    }

    const TimeGrid g(0.0, 1.0, 9);
    std::vector<cplx> q;
    for (double t : g.samples())
        q.push_back(cplx(t * t * t * t - 2.0 * t, t * t));
    const auto d = differentiate(q, g.step(), false);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double t = g[k];
        CHECK(std::abs(d[k] - cplx(4.0 * t * t * t - 2.0, 2.0 * t)) < 1e-11);
    }
    CHECK_THROWS_AS(differentiate(std::vector<cplx>(4), 0.1, false), ContractViolation);
}

TEST_CASE("angle helpers") {
    CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(3.0 * kPi + 0.25) == doctest::Approx(-kPi + 0.25));
    CHECK(principal_log(cplx(-1.0, 0.0)).imag() == doctest::Approx(kPi));
    CHECK((expm(ComplexMatrix::Zero(3, 3)) - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-15);
}
