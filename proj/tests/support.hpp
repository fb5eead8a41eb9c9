#pragma once

// Shared generators for the test suites. Everything is driven by a
// caller-owned std::mt19937 so runs are reproducible.

#include <cmath>
#include <random>
#include <vector>

#include "gwphase/biortho.hpp"
#include "gwphase/scenarios.hpp"

namespace testsupport {

using gwphase::cplx;
using gwphase::ComplexMatrix;
using gwphase::ComplexVector;

inline ComplexMatrix random_matrix(std::mt19937& rng, int n, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = cplx(g(rng), g(rng));
    return m;
}

/// Smooth nonvanishing rescaling factor on [0, 1]: exp of a few Fourier
/// modes plus a small non-periodic drift.
struct Rescaling {
    std::vector<cplx> amp;
    std::vector<double> shift;
    cplx drift;

    cplx operator()(double s) const {
        cplx e = drift * s;
        for (std::size_t j = 0; j < amp.size(); ++j)
            e += amp[j] * std::sin(2.0 * gwphase::kPi * static_cast<double>(j + 1) * s + shift[j]);
        return std::exp(e);
    }
};

inline Rescaling random_rescaling(std::mt19937& rng, int modes = 2, double size = 0.4) {
    std::uniform_real_distribution<double> u(-size, size);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * gwphase::kPi);
    Rescaling r;
    for (int j = 0; j < modes; ++j) {
        r.amp.emplace_back(u(rng), u(rng));
        r.shift.push_back(ph(rng));
    }
    r.drift = cplx(u(rng), u(rng));
    return r;
}

/// psi -> lambda(s) psi and phi -> eta(s) phi with s = (t - t0) / duration.
inline gwphase::EigenbranchPath rescaled(const gwphase::EigenbranchPath& b, const Rescaling& lambda,
                                         const Rescaling& eta) {
    auto out = b;
    for (std::size_t k = 0; k < b.size(); ++k) {
        const double s = (b.grid[k] - b.grid.t0()) / b.grid.duration();
        out.right[k] *= lambda(s);
        out.left[k] *= eta(s);
    }
    return out;
}

/// Strictly monotone map of [0, 1] onto itself.
struct Reparam {
    std::vector<double> amp;  // sum |amp_j| j pi < 1 keeps the derivative positive

    double operator()(double s) const {
        double x = s;
        for (std::size_t j = 0; j < amp.size(); ++j)
            x += amp[j] * std::sin(gwphase::kPi * static_cast<double>(j + 1) * s);
        return x;
    }
};

inline Reparam random_reparam(std::mt19937& rng, int modes = 3) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Reparam r;
    double budget = 0.0;
    for (int j = 0; j < modes; ++j) {
        r.amp.push_back(u(rng));
        budget += std::abs(r.amp.back()) * gwphase::kPi * (j + 1);
    }
    for (auto& a : r.amp)
        a *= 0.8 / budget;
    return r;
}

// Biorthogonal projector onto eigenvalue `w` of a 2x2 generator with the other
// eigenvalue `other` (Cayley-Hamilton: P = (N - other) / (w - other)).
inline ComplexMatrix jones_projector(const ComplexMatrix& n, cplx w, cplx other) {
    return (n - other * ComplexMatrix::Identity(2, 2)) / (w - other);
}

// Projector of the mode of `n` closest in direction to the probe e.
inline ComplexMatrix selected_projector(const ComplexMatrix& n, const ComplexVector& e) {
    const cplx tr = n.trace(), det = n.determinant();
    const cplx root = std::sqrt(tr * tr / 4.0 - det);
    const cplx w1 = tr / 2.0 + root, w2 = tr / 2.0 - root;
    const ComplexMatrix p1 = jones_projector(n, w1, w2), p2 = jones_projector(n, w2, w1);
    auto direction = [](const ComplexMatrix& p) -> ComplexVector {
        return p.col(0).norm() > p.col(1).norm() ? ComplexVector(p.col(0)) : ComplexVector(p.col(1));
    };
    const ComplexVector v1 = direction(p1), v2 = direction(p2);
    return std::abs(e.dot(v1)) / v1.norm() > std::abs(e.dot(v2)) / v2.norm() ? p1 : p2;
}

// Direct matrix-product oracle for [vac, A, B, vac] against [vac, A, vac, B, vac].
inline cplx jones_product_oracle(const gwphase::JonesSegment& a, const gwphase::JonesSegment& b,
                                 const ComplexVector& probe) {
    const ComplexVector e = probe.normalized();
    const ComplexMatrix pa = selected_projector(a.generator, e) * a.transfer();
    const ComplexMatrix pb = selected_projector(b.generator, e) * b.transfer();
    const cplx merged = e.dot(pb * pa * e);
    const cplx separated = e.dot(pb * e) * e.dot(pa * e);
    return -gwphase::kI * std::log(merged / separated);
}

}  // namespace testsupport
