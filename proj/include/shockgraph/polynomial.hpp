#pragma once

#include <array>
#include <vector>

namespace shock {

/// Real polynomial of degree at most 4, coefficients in ascending order.
struct Poly {
    static constexpr int kMaxDegree = 4;
    std::array<double, kMaxDegree + 1> c{};

    Poly() = default;
    explicit Poly(double c0, double c1 = 0.0, double c2 = 0.0, double c3 = 0.0, double c4 = 0.0)
        : c{c0, c1, c2, c3, c4} {}

    double operator()(double t) const {
        double v = c[kMaxDegree];
        for (int i = kMaxDegree - 1; i >= 0; --i) v = v * t + c[i];
        return v;
    }
    Poly derivative() const;
    int degree() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(double s) const;
    /// Product; throws if the result would exceed kMaxDegree.
    Poly operator*(const Poly& o) const;
};

/// Vector-valued quadratic curve P0 + P1 t + P2 t^2, stored per coordinate.
struct PolyCurve {
    Poly x;
    Poly y;
};

/// All real roots of p in [lo, hi], ascending. Double roots touching zero are
/// reported once; intervals where p vanishes identically yield no roots.
std::vector<double> real_roots(const Poly& p, double lo, double hi);

inline constexpr int kMaxRoots = 2 * Poly::kMaxDegree + 2;
/// Allocation-free variant; writes up to kMaxRoots values and returns the count.
int real_roots(const Poly& p, double lo, double hi, double* out);

}  // namespace shock
