#include "shockgraph/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shock {

Poly Poly::derivative() const {
    Poly d;
    for (int i = 1; i <= kMaxDegree; ++i) d.c[i - 1] = c[i] * i;
    return d;
}

int Poly::degree() const {
    for (int i = kMaxDegree; i >= 0; --i)
        if (c[i] != 0.0) return i;
    return -1;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r;
    for (int i = 0; i <= kMaxDegree; ++i) r.c[i] = c[i] + o.c[i];
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r;
    for (int i = 0; i <= kMaxDegree; ++i) r.c[i] = c[i] - o.c[i];
    return r;
}

Poly Poly::operator*(double s) const {
    Poly r;
    for (int i = 0; i <= kMaxDegree; ++i) r.c[i] = c[i] * s;
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r;
    for (int i = 0; i <= kMaxDegree; ++i) {
        if (c[i] == 0.0) continue;
        for (int j = 0; j <= kMaxDegree; ++j) {
            if (o.c[j] == 0.0) continue;
            if (i + j > kMaxDegree) throw std::logic_error("Poly product exceeds degree 4");
            r.c[i + j] += c[i] * o.c[j];
        }
    }
    return r;
}

namespace {

// Root of a function monotone on [a, b] with f(a), f(b) of opposite signs.
double bisect(const Poly& p, double a, double b, double fa) {
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = p(m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Roots of p in [lo, hi], appended to out[n...]; returns the new count.
int roots_rec(const Poly& p, int deg, double lo, double hi, double* out, int n) {
    if (deg <= 0) return n;
    if (deg == 1) {
        const double r = -p.c[0] / p.c[1];
        if (r >= lo && r <= hi) out[n++] = r;
        return n;
    }
    if (deg == 2) {
        const double a = p.c[2], b = p.c[1], c = p.c[0];
        const double disc = b * b - 4 * a * c;
        const double scale = std::max(b * b, std::abs(4 * a * c));
        if (disc < -1e-14 * scale) return n;
        if (disc <= 1e-14 * scale) {
            const double r = -b / (2 * a);
            if (r >= lo && r <= hi) out[n++] = r;
            return n;
        }
        // Stable form, then one Newton step each to polish.
        const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
        const double r[2] = {q / a, q != 0.0 ? c / q : -q / a};
        for (double x : r) {
            const double d = 2 * a * x + b;
            if (d != 0.0) x -= p(x) / d;
            if (x >= lo && x <= hi) out[n++] = x;
        }
        return n;
    }
    double crit[Poly::kMaxDegree];
    const int nc = roots_rec(p.derivative(), deg - 1, lo, hi, crit, 0);
    std::sort(crit, crit + nc);

    double knots[Poly::kMaxDegree + 2];
    int nk = 0;
    knots[nk++] = lo;
    for (int i = 0; i < nc; ++i)
        if (crit[i] > lo && crit[i] < hi && crit[i] > knots[nk - 1]) knots[nk++] = crit[i];
    knots[nk++] = hi;

    // Scale for "touches zero" detection at critical points.
    double mag = 0.0;
    for (int k = 0; k < nk; ++k) {
        double xp = 1.0;
        for (int i = 0; i <= deg; ++i, xp *= std::abs(knots[k])) mag = std::max(mag, std::abs(p.c[i]) * xp);
    }
    const double touch = mag * 1e-14;

    double a = knots[0];
    double fa = p(a);
    if (fa == 0.0) out[n++] = a;
    for (int k = 1; k < nk; ++k) {
        const double b = knots[k];
        const double fb = p(b);
        if (fb == 0.0) {
            out[n++] = b;
        } else if (fa != 0.0 && ((fa < 0.0) != (fb < 0.0))) {
            out[n++] = bisect(p, a, b, fa);
        } else if (k + 1 < nk && std::abs(fb) <= touch) {
            out[n++] = b;  // double root at a critical point
        }
        a = b;
        fa = fb;
    }
    return n;
}

}  // namespace

int real_roots(const Poly& p, double lo, double hi, double* out) {
    if (!(lo <= hi)) return 0;
    const int deg = p.degree();
    if (deg <= 0) return 0;
    // At most deg roots plus knot hits; dedupe below keeps the count <= deg + 2.
    double buf[2 * Poly::kMaxDegree + 2];
    const int n = roots_rec(p, deg, lo, hi, buf, 0);
    std::sort(buf, buf + n);
    int m = 0;
    for (int i = 0; i < n; ++i)
        if (m == 0 || buf[i] != out[m - 1]) out[m++] = buf[i];
    return m;
}

std::vector<double> real_roots(const Poly& p, double lo, double hi) {
    double buf[kMaxRoots];
    const int n = real_roots(p, lo, hi, buf);
    return {buf, buf + n};
}

}  // namespace shock
