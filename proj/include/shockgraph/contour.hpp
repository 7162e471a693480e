#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "shockgraph/geometry.hpp"

namespace shock {

/// An open or closed polyline. For closed fragments the closing edge
/// last -> first is implicit; the first vertex is not repeated.
struct ContourFragment {
    int id = 0;
    std::vector<Point2> vertices;
    bool closed = false;

    std::size_t edge_count() const {
        if (vertices.size() < 2) return 0;
        return closed ? vertices.size() : vertices.size() - 1;
    }
    double length() const;
};

/// A set of fragments together with the image extent they live in.
struct Scene {
    double width = 0.0;
    double height = 0.0;
    std::vector<ContourFragment> fragments;
};

enum class ElementKind : std::uint8_t { Point, Segment };

/// A wavefront emitter: a polyline vertex, or an open polyline edge.
struct BoundaryElement {
    int id = 0;
    ElementKind kind = ElementKind::Point;
    Point2 a;  ///< the point itself, or the segment start
    Point2 b;  ///< segment end; equals `a` for points
    int fragment_id = 0;
    /// Point ids of a segment's endpoints; -1 for points.
    int start_point = -1;
    int end_point = -1;
    /// Elements sharing an endpoint with this one, ascending.
    std::vector<int> adjacency;

    bool is_point() const { return kind == ElementKind::Point; }
    bool is_segment() const { return kind == ElementKind::Segment; }
    double length() const { return distance(a, b); }
    bool adjacent_to(int other) const;
};

/// Distance from p to an element: Euclidean for points, and the open-segment
/// distance for segments (+inf when the foot is not strictly interior).
double element_distance(const BoundaryElement& e, Point2 p);

/// Closest point of an element to p (the foot of the perpendicular for segments,
/// clamped to the closed segment).
Point2 element_foot(const BoundaryElement& e, Point2 p);

/// Recursive max-deviation simplification. Endpoints of open fragments and
/// vertex 0 of closed fragments are always kept; splits happen at the
/// lowest-index farthest vertex. epsilon == 0 returns the input unchanged.
ContourFragment simplify_polyline(const ContourFragment& fragment, double epsilon);

/// Boolean raster, row-major; pixel (col,row) covers [col,col+1] x [row,row+1].
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    bool at(int col, int row) const {
        if (col < 0 || row < 0 || col >= width || row >= height) return false;
        return bits[static_cast<std::size_t>(row) * width + col] != 0;
    }
};

/// Pixel-boundary contours of the foreground. Outer boundaries have positive
/// signed area (counterclockwise in x/y), holes negative. Diagonal neighbours
/// are treated as separate components.
std::vector<ContourFragment> trace_binary_mask(const BinaryMask& mask);

/// Throws InvalidInputError if two segments cross in their interiors or a
/// vertex touches the interior of another fragment's segment.
void check_no_crossings(const std::vector<ContourFragment>& fragments);

/// Splits simplified fragments into point and open-segment sources.
/// Vertices that coincide (within kGeomEps) become one point element.
std::vector<BoundaryElement> decompose(const std::vector<ContourFragment>& fragments);

// --- I/O --------------------------------------------------------------------

class ParseError : public Error {
public:
    using Error::Error;
};

/// Text scene: `scene <w> <h>`, then `fragment <id> <open|closed>` blocks of `v <x> <y>` lines.
Scene parse_scene_text(std::istream& in);
/// JSON scene: {"width":..,"height":..,"fragments":[{"id":..,"closed":..,"vertices":[[x,y],..]}]}
Scene parse_scene_json(const std::string& text);
void write_scene_text(std::ostream& out, const Scene& scene);
/// Portable bitmap, P1 (ASCII) or P4 (binary).
BinaryMask read_pbm(std::istream& in);

/// Dispatches on extension: .pbm -> traced mask, .json -> JSON scene, else text.
Scene load_scene(const std::filesystem::path& path);

}  // namespace shock
