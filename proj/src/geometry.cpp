#include "shockgraph/geometry.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace shock {

double distance_to_segment(Point2 p, Point2 a, Point2 b) {
    const Point2 d = b - a;
    const double len_sq = norm_sq(d);
    if (len_sq == 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, d) / len_sq, 0.0, 1.0);
    return distance(p, a + d * t);
}

double distance_to_open_segment(Point2 p, Point2 a, Point2 b) {
    const Point2 d = b - a;
    const double len_sq = norm_sq(d);
    const double t = dot(p - a, d) / len_sq;
    if (!(t > 0.0 && t < 1.0)) return std::numeric_limits<double>::infinity();
    return std::abs(cross(d, p - a)) / std::sqrt(len_sq);
}

bool segments_cross_interior(Point2 a, Point2 b, Point2 c, Point2 d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    const double s1 = norm(b - a) * kGeomEps;
    const double s2 = norm(d - c) * kGeomEps;
    if (((d1 > s1 && d2 < -s1) || (d1 < -s1 && d2 > s1)) &&
        ((d3 > s2 && d4 < -s2) || (d3 < -s2 && d4 > s2))) {
        return true;
    }
    // Collinear overlap of positive length.
    if (std::abs(d1) <= s1 && std::abs(d2) <= s1) {
        const Point2 u = normalized(b - a);
        double lo = dot(c - a, u);
        double hi = dot(d - a, u);
        if (lo > hi) std::swap(lo, hi);
        const double len = norm(b - a);
        return std::min(hi, len) - std::max(lo, 0.0) > kGeomEps;
    }
    return false;
}

std::string to_string(Point2 p) {
    std::ostringstream os;
    os << '(' << p.x << ", " << p.y << ')';
    return os.str();
}

}  // namespace shock
