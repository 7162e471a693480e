#include "shockgraph/bisector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shock {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
/// Supporting lines closer than this in angle are treated as parallel.
constexpr double kParallelAngle = 1e-7;

}  // namespace

const char* to_string(BisectorKind kind) {
    switch (kind) {
        case BisectorKind::Line: return "line";
        case BisectorKind::Parabola: return "parabola";
        case BisectorKind::PerpendicularAtEndpoint: return "perpendicular";
        case BisectorKind::Midline: return "midline";
    }
    return "?";
}

Generator as_generator(const BoundaryElement& e) { return {e.id, e.kind, e.a, e.b}; }

void Bisector::finalize() {
    switch (kind_) {
        case BisectorKind::Parabola: {
            const double k = 1.0 / (2.0 * h_);
            curve_.x = Poly(origin_.x + normal_.x * h_ * 0.5, dir_.x, normal_.x * k);
            curve_.y = Poly(origin_.y + normal_.y * h_ * 0.5, dir_.y, normal_.y * k);
            const Poly r(h_ * 0.5, 0.0, k);
            radius_sq_ = r * r;
            break;
        }
        default:
            curve_.x = Poly(origin_.x, dir_.x);
            curve_.y = Poly(origin_.y, dir_.y);
            if (kind_ == BisectorKind::Line && plus_.kind == ElementKind::Point)
                radius_sq_ = Poly(h_ * h_, 0.0, 1.0);
            else if (kind_ == BisectorKind::Line)
                radius_sq_ = Poly(0.0, 0.0, rate_ * rate_);
            else if (kind_ == BisectorKind::Midline)
                radius_sq_ = Poly(h_ * h_);
            else
                radius_sq_ = Poly(0.0, 0.0, 1.0);
    }
}

Point2 Bisector::point(double t) const {
    if (kind_ == BisectorKind::Parabola) return origin_ + dir_ * t + normal_ * ((t * t + h_ * h_) / (2.0 * h_));
    return origin_ + dir_ * t;
}

Point2 Bisector::velocity(double t) const {
    if (kind_ == BisectorKind::Parabola) return dir_ + normal_ * (t / h_);
    return dir_;
}

double Bisector::radius(double t) const {
    switch (kind_) {
        case BisectorKind::Parabola: return (t * t + h_ * h_) / (2.0 * h_);
        case BisectorKind::PerpendicularAtEndpoint: return std::abs(t);
        case BisectorKind::Midline: return h_;
        case BisectorKind::Line:
            if (plus_.kind == ElementKind::Point) return std::hypot(h_, t);
            return std::abs(rate_ * t);
    }
    return 0.0;
}

double Bisector::radius_rate(double t) const {
    switch (kind_) {
        case BisectorKind::Parabola: return t / h_;
        case BisectorKind::PerpendicularAtEndpoint: return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0);
        case BisectorKind::Midline: return 0.0;
        case BisectorKind::Line:
            if (plus_.kind == ElementKind::Point) {
                const double r = std::hypot(h_, t);
                return r > 0 ? t / r : 0.0;
            }
            return t >= 0 ? std::abs(rate_) : -std::abs(rate_);
    }
    return 0.0;
}

double Bisector::half_angle(double t) const {
    return std::acos(std::clamp(std::abs(flow(t)), 0.0, 1.0));
}

double Bisector::curvature(double t) const {
    if (kind_ != BisectorKind::Parabola) return 0.0;
    const double q = t / h_;
    return 1.0 / (h_ * std::pow(1.0 + q * q, 1.5));
}

namespace {

Point2 contact_on(const Generator& g, Point2 q) {
    if (g.kind == ElementKind::Point) return g.a;
    const Point2 d = g.b - g.a;
    const double s = std::clamp(dot(q - g.a, d) / norm_sq(d), 0.0, 1.0);
    return g.a + d * s;
}

}  // namespace

Point2 Bisector::contact_plus(double t) const { return contact_on(plus_, point(t)); }
Point2 Bisector::contact_minus(double t) const { return contact_on(minus_, point(t)); }

double Bisector::arc_from_native(double t) const {
    if (kind_ != BisectorKind::Parabola) return t;
    const double q = t / h_;
    return 0.5 * t * std::sqrt(1.0 + q * q) + 0.5 * h_ * std::asinh(q);
}

double Bisector::native_from_arc(double s) const {
    if (kind_ != BisectorKind::Parabola) return s;
    // |t| <= |s| because ds/dt >= 1.
    double lo = -std::abs(s), hi = std::abs(s);
    double t = s;
    for (int it = 0; it < 100; ++it) {
        const double f = arc_from_native(t) - s;
        if (f == 0.0) break;
        if (f > 0) hi = t;
        else lo = t;
        double next = t - f / std::sqrt(1.0 + (t / h_) * (t / h_));
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) <= 1e-15 * std::max(1.0, std::abs(t))) {
            t = next;
            break;
        }
        t = next;
    }
    return t;
}

double Bisector::source_param() const {
    switch (kind_) {
        case BisectorKind::Midline: return t_lo_;
        case BisectorKind::Line:
            if (plus_.kind == ElementKind::Point) return std::clamp(0.0, t_lo_, t_hi_);
            return std::abs(t_lo_) <= std::abs(t_hi_) ? t_lo_ : t_hi_;
        default: return std::clamp(0.0, t_lo_, t_hi_);
    }
}

std::vector<int> Bisector::source_directions() const {
    if (kind_ == BisectorKind::Midline) return {+1};
    const double s = source_param();
    if (s <= t_lo_) return {+1};
    if (s >= t_hi_) return {-1};
    return {-1, +1};
}

std::optional<std::pair<double, double>> Bisector::bounded_domain(const Rect& box) const {
    double lo = t_lo_, hi = t_hi_;
    if (kind_ != BisectorKind::Parabola) {
        auto slab = [&](double o, double d, double mn, double mx) {
            if (std::abs(d) < 1e-300) {
                if (o < mn || o > mx) hi = lo - 1.0;
                return;
            }
            double a = (mn - o) / d, b = (mx - o) / d;
            if (a > b) std::swap(a, b);
            lo = std::max(lo, a);
            hi = std::min(hi, b);
        };
        slab(origin_.x, dir_.x, box.min.x, box.max.x);
        slab(origin_.y, dir_.y, box.min.y, box.max.y);
    }
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) return std::nullopt;
    return std::pair{lo, hi};
}

std::vector<std::pair<double, double>> Bisector::inside_intervals(const Rect& box, double lo, double hi) const {
    std::vector<double> knots{lo, hi};
    for (const auto& [poly, v] : {std::pair{curve_.x, box.min.x}, std::pair{curve_.x, box.max.x},
                                  std::pair{curve_.y, box.min.y}, std::pair{curve_.y, box.max.y}}) {
        for (double r : real_roots(poly - Poly(v), lo, hi)) knots.push_back(r);
    }
    std::sort(knots.begin(), knots.end());
    std::vector<std::pair<double, double>> out;
    const double slack = 1e-9 * std::max({1.0, box.width(), box.height()});
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double a = knots[i], b = knots[i + 1];
        if (!(b > a)) continue;
        if (!box.contains(point(0.5 * (a + b)), slack)) continue;
        if (!out.empty() && out.back().second >= a) out.back().second = b;
        else out.emplace_back(a, b);
    }
    if (out.empty() && lo == hi && box.contains(point(lo), slack)) out.emplace_back(lo, hi);
    return out;
}

double Bisector::project(Point2 q) const {
    return std::clamp(dot(q - origin_, dir_), t_lo_, t_hi_);
}

// --- constructors -----------------------------------------------------------

Bisector bisector_point_point(const BoundaryElement& a, const BoundaryElement& b) {
    const double gap = distance(a.a, b.a);
    if (gap <= kGeomEps)
        throw DegenerateInputError("coincident point sources " + std::to_string(a.id) + ", " + std::to_string(b.id));
    Bisector bis;
    bis.kind_ = BisectorKind::Line;
    bis.plus_ = as_generator(a);
    bis.minus_ = as_generator(b);
    bis.origin_ = (a.a + b.a) * 0.5;
    bis.dir_ = perp((b.a - a.a) / gap);
    bis.h_ = 0.5 * gap;
    bis.t_lo_ = -kInf;
    bis.t_hi_ = kInf;
    bis.finalize();
    return bis;
}

Bisector bisector_endpoint_own_segment(const BoundaryElement& p, const BoundaryElement& u) {
    Bisector bis;
    bis.kind_ = BisectorKind::PerpendicularAtEndpoint;
    bis.plus_ = as_generator(p);
    bis.minus_ = as_generator(u);
    bis.origin_ = p.a;
    bis.dir_ = perp(normalized(u.b - u.a));
    bis.t_lo_ = -kInf;
    bis.t_hi_ = kInf;
    bis.finalize();
    return bis;
}

std::optional<Bisector> bisector_point_segment(const BoundaryElement& p, const BoundaryElement& u) {
    const Point2 e1 = normalized(u.b - u.a);
    const double along = dot(p.a - u.a, e1);
    const Point2 foot = u.a + e1 * along;
    const double h = distance(p.a, foot);
    const double len = u.length();
    if (h <= kGeomEps) {
        if (along > kGeomEps && along < len - kGeomEps)
            throw InvalidInputError("point source " + std::to_string(p.id) + " touches segment " + std::to_string(u.id));
        return std::nullopt;
    }
    Bisector bis;
    bis.kind_ = BisectorKind::Parabola;
    bis.plus_ = as_generator(p);
    bis.minus_ = as_generator(u);
    bis.origin_ = foot;
    bis.dir_ = e1;
    bis.normal_ = (p.a - foot) / h;
    bis.h_ = h;
    bis.t_lo_ = -along;
    bis.t_hi_ = len - along;
    bis.finalize();
    return bis;
}

std::vector<Bisector> bisector_segment_segment(const BoundaryElement& u, const BoundaryElement& v) {
    std::vector<Bisector> out;
    const Point2 eu = normalized(u.b - u.a);
    const Point2 ev = normalized(v.b - v.a);
    const double lu = u.length(), lv = v.length();
    const double sin_angle = cross(eu, ev);

    // Interval of t where the foot of origin + t*dir on a segment (start s0, unit e, length l)
    // is strictly interior.
    auto foot_interval = [](Point2 origin, Point2 dir, Point2 s0, Point2 e, double l) {
        const double c0 = dot(origin - s0, e);
        const double c1 = dot(dir, e);
        if (std::abs(c1) < 1e-15) {
            if (c0 > 0 && c0 < l) return std::pair{-kInf, kInf};
            return std::pair{1.0, -1.0};
        }
        double a = (0 - c0) / c1, b = (l - c0) / c1;
        if (a > b) std::swap(a, b);
        return std::pair{a, b};
    };

    if (std::abs(sin_angle) < kParallelAngle) {
        const Point2 n = perp(eu);
        const double offset = dot(v.a - u.a, n);
        if (std::abs(offset) <= kGeomEps) {
            const double a = dot(v.a - u.a, eu), b = dot(v.b - u.a, eu);
            if (std::min(std::max(a, b), lu) - std::max(std::min(a, b), 0.0) > kGeomEps)
                throw InvalidInputError("collinear segments " + std::to_string(u.id) + " and " +
                                        std::to_string(v.id) + " overlap");
            return out;
        }
        Bisector bis;
        bis.kind_ = BisectorKind::Midline;
        bis.plus_ = as_generator(u);
        bis.minus_ = as_generator(v);
        bis.origin_ = u.a + n * (0.5 * offset);
        bis.dir_ = eu;
        bis.h_ = 0.5 * std::abs(offset);
        const auto iu = foot_interval(bis.origin_, eu, u.a, eu, lu);
        const auto iv = foot_interval(bis.origin_, eu, v.a, ev, lv);
        bis.t_lo_ = std::max(iu.first, iv.first);
        bis.t_hi_ = std::min(iu.second, iv.second);
        if (bis.t_hi_ - bis.t_lo_ <= kGeomEps) return out;
        bis.finalize();
        out.push_back(bis);
        return out;
    }

    // Intersection of the supporting lines.
    const double s = cross(v.a - u.a, ev) / sin_angle;
    const Point2 x = u.a + eu * s;
    int branch = 0;
    for (Point2 d : {normalized(eu + ev), normalized(eu - ev)}) {
        ++branch;
        const auto iu = foot_interval(x, d, u.a, eu, lu);
        const auto iv = foot_interval(x, d, v.a, ev, lv);
        const double lo = std::max(iu.first, iv.first);
        const double hi = std::min(iu.second, iv.second);
        if (hi - lo <= kGeomEps) continue;
        const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
        if (lo < -kGeomEps * scale && hi > kGeomEps * scale)
            throw InvalidInputError("segments " + std::to_string(u.id) + " and " + std::to_string(v.id) + " cross");
        Bisector bis;
        bis.kind_ = BisectorKind::Line;
        bis.plus_ = as_generator(u);
        bis.minus_ = as_generator(v);
        bis.origin_ = x;
        bis.dir_ = d;
        bis.rate_ = std::abs(cross(d, eu));
        bis.t_lo_ = lo;
        bis.t_hi_ = hi;
        bis.branch_ = branch;
        bis.finalize();
        out.push_back(bis);
    }
    return out;
}

std::vector<Bisector> make_bisectors(const BoundaryElement& a, const BoundaryElement& b) {
    if (a.is_point() && b.is_point()) return {bisector_point_point(a, b)};
    if (a.is_segment() && b.is_segment()) return bisector_segment_segment(a, b);
    const BoundaryElement& p = a.is_point() ? a : b;
    const BoundaryElement& u = a.is_point() ? b : a;
    if (u.start_point == p.id || u.end_point == p.id) return {bisector_endpoint_own_segment(p, u)};
    if (auto bis = bisector_point_segment(p, u)) return {*bis};
    return {};
}

}  // namespace shock
