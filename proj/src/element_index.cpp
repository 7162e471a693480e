#include "shockgraph/element_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shock {

ElementIndex::ElementIndex(std::span<const BoundaryElement> elements, const Rect& bounds)
    : elements_(elements), bounds_(bounds), stamp_(elements.size(), 0) {
    const double area = std::max(bounds.width() * bounds.height(), 1e-12);
    const double n = std::max<double>(1.0, static_cast<double>(elements.size()));
    cell_ = std::max(std::sqrt(area / n), 1e-6);
    nx_ = std::clamp(static_cast<int>(std::ceil(bounds.width() / cell_)), 1, 4096);
    ny_ = std::clamp(static_cast<int>(std::ceil(bounds.height() / cell_)), 1, 4096);
    cell_ = std::max(bounds.width() / nx_, bounds.height() / ny_);
    cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});

    for (const auto& e : elements) {
        if (e.is_point()) {
            cells_[static_cast<std::size_t>(cy(e.a.y)) * nx_ + cx(e.a.x)].push_back(e.id);
            continue;
        }
        // Walk the rows the segment spans, covering its x-extent inside each row band.
        const int j0 = cy(std::min(e.a.y, e.b.y)), j1 = cy(std::max(e.a.y, e.b.y));
        for (int j = j0; j <= j1; ++j) {
            const double y_lo = bounds_.min.y + j * cell_, y_hi = y_lo + cell_;
            double x_lo = std::min(e.a.x, e.b.x), x_hi = std::max(e.a.x, e.b.x);
            const double dy = e.b.y - e.a.y;
            if (std::abs(dy) > 1e-300) {
                const double ta = std::clamp((y_lo - e.a.y) / dy, 0.0, 1.0);
                const double tb = std::clamp((y_hi - e.a.y) / dy, 0.0, 1.0);
                const double xa = e.a.x + (e.b.x - e.a.x) * ta, xb = e.a.x + (e.b.x - e.a.x) * tb;
                x_lo = std::min(xa, xb);
                x_hi = std::max(xa, xb);
            }
            for (int i = cx(x_lo); i <= cx(x_hi); ++i) cells_[static_cast<std::size_t>(j) * nx_ + i].push_back(e.id);
        }
    }
}

int ElementIndex::cx(double x) const {
    return std::clamp(static_cast<int>(std::floor((x - bounds_.min.x) / cell_)), 0, nx_ - 1);
}

int ElementIndex::cy(double y) const {
    return std::clamp(static_cast<int>(std::floor((y - bounds_.min.y) / cell_)), 0, ny_ - 1);
}

bool ElementIndex::visit(int id) const {
    if (stamp_[id] == epoch_) return false;
    stamp_[id] = epoch_;
    return true;
}

void ElementIndex::query(const Rect& r, std::vector<int>& out) const {
    out.clear();
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
    const int i0 = cx(r.min.x), i1 = cx(r.max.x), j0 = cy(r.min.y), j1 = cy(r.max.y);
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i)
            for (int id : cell(i, j))
                if (visit(id)) out.push_back(id);
}

bool ElementIndex::any_closer(Point2 q, double limit, int skip_a, int skip_b) const {
    if (!(limit > 0)) return false;
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
    const int ci = cx(q.x), cj = cy(q.y);
    const int reach = static_cast<int>(std::ceil(limit / cell_)) + 1;
    const int max_ring = std::min(reach, std::max(nx_, ny_));
    for (int ring = 0; ring <= max_ring; ++ring) {
        const int i0 = std::max(ci - ring, 0), i1 = std::min(ci + ring, nx_ - 1);
        const int j0 = std::max(cj - ring, 0), j1 = std::min(cj + ring, ny_ - 1);
        for (int j = j0; j <= j1; ++j) {
            const bool edge_row = (j == cj - ring || j == cj + ring);
            for (int i = i0; i <= i1; ++i) {
                if (!edge_row && i != ci - ring && i != ci + ring) continue;
                for (int id : cell(i, j)) {
                    if (id == skip_a || id == skip_b || !visit(id)) continue;
                    if (element_distance(elements_[id], q) < limit) return true;
                }
            }
        }
    }
    return false;
}

double ElementIndex::nearest_distance(Point2 q, int skip_a, int skip_b) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : elements_) {
        if (e.id == skip_a || e.id == skip_b) continue;
        best = std::min(best, element_distance(e, q));
    }
    return best;
}

}  // namespace shock
