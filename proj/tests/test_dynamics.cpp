#include <doctest.h>

#include <cmath>

#include "gwphase/dynamics.hpp"
#include "gwphase/errors.hpp"
#include "gwphase/scenarios.hpp"

using namespace gwphase;

namespace {

ComplexCone cone_with(cplx polar, double period, cplx field = 1.0) {
    ComplexCone c;
    c.polar = polar;
    c.period = period;
    c.field = field;
    return c;
}

HamiltonianLoop diagonal_loop(const std::function<std::pair<cplx, cplx>(double)>& f, std::size_t n) {
    TimeGrid grid(0.0, 1.0, n);
    std::vector<ComplexMatrix> hs;
    for (double t : grid.samples()) {
        const auto [a, b] = f(t);
        ComplexMatrix h = ComplexMatrix::Zero(2, 2);
        h(0, 0) = a;
        h(1, 1) = b;
        hs.push_back(h);
    }
    return HamiltonianLoop(grid, hs);
}

}  // namespace

TEST_CASE("constant Hamiltonian: eigenstate start has no geometric phase") {
    ComplexMatrix h(2, 2);
    h << cplx(0.7, -0.2), 0.4, cplx(0.1, 0.3), cplx(-0.4, -0.05);
    const HamiltonianLoop loop(TimeGrid(0.0, 5.0, 101), std::vector<ComplexMatrix>(101, h));
    for (std::size_t i = 0; i < 2; ++i) {
        const auto r = evolve(loop, i, 2000);
        CHECK(std::abs(r.extracted_geometric) < 1e-9);
        CHECK(std::abs(r.predicted.value) < 1e-12);
    }
}

TEST_CASE("Hermitian cone at T = 200 reproduces the solid-angle phase") {
    // Non-adiabatic leakage scales as sin^2(Theta) / T; a narrow cone keeps it below 1e-2.
    const auto cone = cone_with(0.4, 200.0);
    const auto r = evolve(cone_loop(cone, 2001), cone_upper_index(cone), 4000);
    CHECK(std::abs(r.extracted_geometric - cplx(-kPi * (1.0 - std::cos(0.4)))) < 1e-2);
    CHECK(std::abs(r.final_state.norm() - 1.0) < 1e-7);
}

TEST_CASE("complex cone: survival magnitude follows Im of the dynamical and geometric phases") {
    double previous = 1e9;
    for (double period : {20.0, 80.0, 320.0}) {
        // Start on the less damped branch so leakage into the other one decays.
        const auto cone = cone_with(cplx(0.5, 0.2), period, cplx(1.0, -0.05));
        const auto r = evolve(cone_loop(cone, 2001), 1 - cone_upper_index(cone), 8000);
        const double mismatch = std::abs(std::log(std::abs(r.survival_amplitude)) -
                                         (r.dynamical_phase.imag() - r.predicted.value.imag()));
        CHECK(mismatch < previous);
        previous = mismatch;
    }
    CHECK(previous < 2e-2);
}

TEST_CASE("adiabatic sweep: errors fall with the period") {
    auto family = [](double period) { return cone_loop(cone_with(kPi / 3.0, period), 2001); };
    const auto points = adiabatic_sweep(family, {20.0, 80.0, 320.0}, 1, 20.0);
    REQUIRE(points.size() == 3);
    CHECK(points[0].error > points[1].error);
    CHECK(points[1].error > points[2].error);
    CHECK(points[0].period == 20.0);
    CHECK(points[2].period == 320.0);

    const auto threaded = adiabatic_sweep(family, {20.0, 80.0, 320.0}, 1, 20.0, 3);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(threaded[k].error == points[k].error);
}

TEST_CASE("complex cone with gap ratio above 50 converges within 1e-2") {
    const ComplexCone shape = cone_with(cplx(0.5, 0.2), 1.0);
    auto family = [&](double period) {
        ComplexCone c = shape;
        c.period = period;
        return cone_loop(c, 2001);
    };
    const auto points = adiabatic_sweep(family, {400.0}, cone_upper_index(shape), 20.0);
    CHECK(points[0].report.ratio > 50.0);
    CHECK(points[0].report.adiabatic);
    CHECK(points[0].error < 1e-2);
}

TEST_CASE("fast drive is flagged as non-adiabatic") {
    const auto report = adiabaticity_diagnostic(cone_loop(cone_with(0.8, 2.0), 401));
    CHECK(report.ratio < 1.0);
    CHECK_FALSE(report.adiabatic);
}

TEST_CASE("adiabaticity diagnostic arithmetic") {
    SUBCASE("static gap") {
        ComplexMatrix h = ComplexMatrix::Zero(2, 2);
        h(0, 0) = 0.5;
        h(1, 1) = -0.5;
        const HamiltonianLoop loop(TimeGrid(0.0, 100.0, 51), std::vector<ComplexMatrix>(51, h));
        const auto r = adiabaticity_diagnostic(loop);
        CHECK(r.min_gap == doctest::Approx(1.0));
        CHECK(r.ratio == doctest::Approx(100.0 / (2.0 * kPi)));
        CHECK(r.adiabatic);
    }
    SUBCASE("closing gap") {
        const auto loop = diagonal_loop([](double t) {
            const double g = 0.2 + (t - 0.3) * (t - 0.3);
            return std::pair<cplx, cplx>(g, -g);
        }, 101);
        const auto r = adiabaticity_diagnostic(loop);
        CHECK(r.gap_time == doctest::Approx(0.3));
        CHECK(r.min_gap == doctest::Approx(0.4));
    }
    SUBCASE("equal real parts") {
        const auto loop = diagonal_loop([](double) {
            return std::pair<cplx, cplx>(cplx(1.0, -0.1), cplx(1.0, -0.5));
        }, 21);
        const auto r = adiabaticity_diagnostic(loop);
        CHECK(r.ratio == 0.0);
        CHECK_FALSE(r.adiabatic);
    }
}

TEST_CASE("sudden limit: propagator against the non-Abelian holonomy") {
    const auto shape = cone_with(cplx(0.5, 0.2), 1.0);
    const cplx omega(1.0, -0.1);

    SUBCASE("constant Hamiltonian") {
        const TimeGrid grid(0.0, 1.0, 201);
        const ComplexMatrix h = omega * ComplexMatrix::Identity(2, 2);
        const HamiltonianLoop loop(grid, std::vector<ComplexMatrix>(201, h));
        const std::vector<ComplexMatrix> frame(201, ComplexMatrix::Identity(2, 2));
        CHECK(sudden_propagator_check(loop, FrameLoop(grid, frame, frame), omega, 2000) < 1e-10);
    }
    SUBCASE("fast cycle and its growth with T") {
        double previous = 0.0;
        for (double period : {0.01, 0.1, 1.0}) {
            ComplexCone c = shape;
            c.period = period;
            const auto l = common_omega_loop(c, omega, 0.05, 2001);
            const double dev = sudden_propagator_check(l.loop, l.frames, omega, 4000);
            if (period == 0.01)
                CHECK(dev < 1e-3);
            CHECK(dev > previous);
            previous = dev;
        }
    }
}

TEST_CASE("integrator convergence") {
    const auto cone = cone_with(cplx(0.5, 0.2), 80.0, cplx(1.0, -0.02));
    const auto loop = cone_loop(cone, 2001);
    const auto a = evolve(loop, cone_upper_index(cone), 8000);
    const auto b = evolve(loop, cone_upper_index(cone), 16000);
    CHECK(std::abs(a.extracted_geometric - b.extracted_geometric) < 1e-8);
}

TEST_CASE("Hermitian loops preserve the norm") {
    for (double theta : {0.3, 1.0, 2.0}) {
        const auto loop = cone_loop(cone_with(theta, 30.0), 1001);
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(std::abs(evolve(loop, i, 3000).final_state.norm() - 1.0) < 1e-7);
    }
}

TEST_CASE("evolve rejects bad requests") {
    const auto loop = cone_loop(cone_with(0.5, 10.0), 101);
    CHECK_THROWS_AS(evolve(loop, 2, 200), ContractViolation);
    CHECK_THROWS_AS(evolve(loop, 0, 50), ContractViolation);
}
