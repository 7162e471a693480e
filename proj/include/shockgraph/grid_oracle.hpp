#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "shockgraph/contour.hpp"
#include "shockgraph/shock_graph.hpp"

namespace shock {

class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Brute-force distance field: for every cell center, the nearest element and
/// the nearest element that is not adjacent to it. Test-only.
struct GridField {
    struct Entry {
        double distance = 0.0;
        int element = -1;
    };

    Rect window;
    double h = 1.0;
    int nx = 0;
    int ny = 0;
    std::vector<Entry> nearest;
    std::vector<Entry> second;

    Point2 center(int i, int j) const { return {window.min.x + (i + 0.5) * h, window.min.y + (j + 0.5) * h}; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
};

inline constexpr std::size_t kMaxOracleCells = 10'000'000;

/// Throws ResolutionError when h <= 0 or the window needs more than kMaxOracleCells cells.
GridField compute_field(std::span<const BoundaryElement> elements, const Rect& window, double h);

struct ShockCell {
    int i = 0;
    int j = 0;
    Point2 center;
};

/// Cells whose center lies within about `tol` of the bisector between its
/// nearest generator and a rival: any element, not adjacent to the nearest one,
/// that is nearest at one of the eight neighbouring cells. The distance gap is
/// divided by its gradient magnitude |u1 - u2| (u = unit ray from each
/// contact), which turns it into a distance to the bisector. With
/// normalize=false the raw gap is used.
std::vector<ShockCell> extract_shock_cells(const GridField& field, std::span<const BoundaryElement> elements,
                                           double tol, bool normalize = true);

/// Points every `step` of arc along each link, skipping pieces whose two
/// generators are adjacent (endpoint spokes and corner bisectors, which the
/// field cannot see) unless `include_adjacent`. Only points inside `window` are kept.
std::vector<Point2> rasterize_links(const ShockGraph& graph, double step, const Rect& window,
                                   bool include_adjacent = false);

/// Largest distance from a point of `from` to its nearest point of `to`.
/// Returns +inf when `to` is empty and `from` is not.
double directed_hausdorff(const std::vector<Point2>& from, const std::vector<Point2>& to);

/// 8-bit portable graymap of the nearest-distance field (binary P5).
void write_pgm(std::ostream& out, const GridField& field);
/// "i j x y" per line.
void write_cell_list(std::ostream& out, const std::vector<ShockCell>& cells);

}  // namespace shock
