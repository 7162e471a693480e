#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "shockgraph/contour.hpp"

namespace shock {

/// Uniform-grid bucketing of boundary elements for proximity queries.
/// Queries reuse an internal visit stamp, so one index must not be queried
/// from several threads at once.
class ElementIndex {
public:
    ElementIndex(std::span<const BoundaryElement> elements, const Rect& bounds);

    const Rect& bounds() const { return bounds_; }
    double cell_size() const { return cell_; }

    /// Ids of elements whose bounding boxes touch `r`, each once.
    void query(const Rect& r, std::vector<int>& out) const;

    /// True when some element other than `skip_a`/`skip_b` is strictly closer
    /// to q than `limit` (open-segment distance). Searches outward ring by ring.
    bool any_closer(Point2 q, double limit, int skip_a, int skip_b) const;

    /// Smallest element distance to q among elements other than the skipped ones.
    double nearest_distance(Point2 q, int skip_a = -1, int skip_b = -1) const;

private:
    int cx(double x) const;
    int cy(double y) const;
    const std::vector<int>& cell(int i, int j) const { return cells_[static_cast<std::size_t>(j) * nx_ + i]; }
    bool visit(int id) const;

    std::span<const BoundaryElement> elements_;
    Rect bounds_;
    double cell_ = 1.0;
    int nx_ = 1;
    int ny_ = 1;
    std::vector<std::vector<int>> cells_;
    mutable std::vector<std::uint32_t> stamp_;
    mutable std::uint32_t epoch_ = 0;
};

}  // namespace shock
