#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace shock {

/// Coincidence tolerance for input geometry, in pixels.
inline constexpr double kGeomEps = 1e-9;
/// Equidistance tolerance used when deciding whether an element ties a shock radius.
inline constexpr double kEqEps = 1e-7;
/// Junction locations closer than this are the same node.
inline constexpr double kMergeEps = 1e-6;

inline constexpr double kPi = 3.14159265358979323846;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateInputError : public Error {
public:
    using Error::Error;
};

class InvalidInputError : public Error {
public:
    using Error::Error;
};

class StructuralError : public Error {
public:
    using Error::Error;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
    constexpr Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
    constexpr Point2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Point2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Point2 operator-() const { return {-x, -y}; }
    Point2& operator+=(Point2 o) { x += o.x; y += o.y; return *this; }
    Point2& operator-=(Point2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr bool operator==(const Point2&) const = default;
};

inline constexpr Point2 operator*(double s, Point2 p) { return p * s; }

inline constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline constexpr double norm_sq(Point2 a) { return dot(a, a); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
/// Counterclockwise quarter turn.
inline constexpr Point2 perp(Point2 a) { return {-a.y, a.x}; }
inline Point2 normalized(Point2 a) { return a / norm(a); }
inline bool is_finite(Point2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

/// Angle of a direction in (-pi, pi].
inline double angle_of(Point2 a) { return std::atan2(a.y, a.x); }

/// Distance from p to the closed segment [a, b].
double distance_to_segment(Point2 p, Point2 a, Point2 b);

/// Distance from p to the open segment (a, b): perpendicular distance when the
/// foot falls strictly inside, +inf otherwise (the endpoints are separate sources).
double distance_to_open_segment(Point2 p, Point2 a, Point2 b);

/// True when the open segments (a,b) and (c,d) share an interior point.
bool segments_cross_interior(Point2 a, Point2 b, Point2 c, Point2 d);

/// Axis-aligned rectangle.
struct Rect {
    Point2 min;
    Point2 max;

    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    Point2 center() const { return (min + max) * 0.5; }
    bool contains(Point2 p, double slack = 0.0) const {
        return p.x >= min.x - slack && p.x <= max.x + slack && p.y >= min.y - slack &&
               p.y <= max.y + slack;
    }
    Rect expanded(double margin) const {
        return {{min.x - margin, min.y - margin}, {max.x + margin, max.y + margin}};
    }
    Rect scaled(double factor) const {
        const Point2 c = center();
        const Point2 half{width() * 0.5 * factor, height() * 0.5 * factor};
        return {c - half, c + half};
    }
};

std::string to_string(Point2 p);

}  // namespace shock
