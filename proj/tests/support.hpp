#pragma once

// Test-side helpers. Distances here are written from scratch on purpose so the
// checks do not lean on the library's own geometry.

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "shockgraph/contour.hpp"
#include "shockgraph/shock_graph.hpp"

namespace testing {

using shock::BoundaryElement;
using shock::ContourFragment;
using shock::Point2;
using shock::Scene;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double dist(Point2 a, Point2 b) { return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y)); }

// Closed segment: clamp the projection.
inline double dist_closed_segment(Point2 p, Point2 a, Point2 b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double u = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    u = u < 0 ? 0 : (u > 1 ? 1 : u);
    return dist(p, {a.x + u * dx, a.y + u * dy});
}

// Open segment: only perpendicular feet strictly inside count.
inline double dist_open_segment(Point2 p, Point2 a, Point2 b, double margin = 0.0) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    const double u = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    if (u <= margin || u >= 1 - margin) return kInf;
    return std::abs((p.x - a.x) * dy - (p.y - a.y) * dx) / std::sqrt(len2);
}

inline double dist_line(Point2 p, Point2 a, Point2 b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    return std::abs((p.x - a.x) * dy - (p.y - a.y) * dx) / std::sqrt(dx * dx + dy * dy);
}

inline double dist_element(const BoundaryElement& e, Point2 p) {
    return e.is_point() ? dist(p, e.a) : dist_open_segment(p, e.a, e.b);
}

inline BoundaryElement point_element(int id, Point2 p) {
    BoundaryElement e;
    e.id = id;
    e.kind = shock::ElementKind::Point;
    e.a = e.b = p;
    return e;
}

inline BoundaryElement segment_element(int id, Point2 a, Point2 b) {
    BoundaryElement e;
    e.id = id;
    e.kind = shock::ElementKind::Segment;
    e.a = a;
    e.b = b;
    return e;
}

inline ContourFragment polygon(int id, std::vector<Point2> v) {
    ContourFragment f;
    f.id = id;
    f.closed = true;
    f.vertices = std::move(v);
    return f;
}

inline ContourFragment regular_polygon(int id, Point2 c, double radius, int n) {
    std::vector<Point2> v;
    for (int k = 0; k < n; ++k) {
        const double t = 2 * M_PI * k / n;
        v.push_back({c.x + radius * std::cos(t), c.y + radius * std::sin(t)});
    }
    return polygon(id, std::move(v));
}

inline ContourFragment dense_ellipse(int id, Point2 c, double a, double b, int n) {
    std::vector<Point2> v;
    for (int k = 0; k < n; ++k) {
        const double t = 2 * M_PI * k / n;
        v.push_back({c.x + a * std::cos(t), c.y + b * std::sin(t)});
    }
    return polygon(id, std::move(v));
}

inline Scene scene_of(double w, double h, std::vector<ContourFragment> frags) {
    Scene s;
    s.width = w;
    s.height = h;
    s.fragments = std::move(frags);
    return s;
}

inline Scene rectangle_scene() {
    return scene_of(10, 10, {polygon(0, {{3, 4}, {7, 4}, {7, 6}, {3, 6}})});
}

struct Violation {
    int link = -1;
    Point2 at;
    double radius = 0.0;
    double other = 0.0;
};

// No element other than the generators may be closer than r(s) - tol.
inline std::vector<Violation> validity_violations(const shock::ShockGraph& g, int samples_per_link, double tol) {
    std::vector<Violation> out;
    for (const auto& l : g.links) {
        double total = 0.0;
        for (const auto& p : l.pieces) total += p.length();
        for (int k = 0; k < samples_per_link; ++k) {
            const double s = total * k / (samples_per_link - 1);
            double left = s;
            const shock::LinkPiece* piece = &l.pieces.back();
            for (const auto& p : l.pieces) {
                if (left <= p.length()) {
                    piece = &p;
                    break;
                }
                left -= p.length();
            }
            left = std::min(left, piece->length());
            const auto& b = piece->bisector;
            const double sign = piece->t_to >= piece->t_from ? 1.0 : -1.0;
            const double t = b.native_from_arc(b.arc_from_native(piece->t_from) + sign * left);
            const Point2 q = b.point(t);
            const double r = b.radius(t);
            for (const auto& e : g.elements) {
                if (e.id == b.plus().id || e.id == b.minus().id) continue;
                const double d = dist_element(e, q);
                if (d < r - tol) out.push_back({l.id, q, r, d});
            }
        }
    }
    return out;
}

}  // namespace testing
