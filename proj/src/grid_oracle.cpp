#include "shockgraph/grid_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace shock {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Unit vector from the element's closest point toward q.
Point2 ray_from(const BoundaryElement& e, Point2 q) {
    const Point2 d = q - element_foot(e, q);
    const double n = norm(d);
    return n > 0 ? d / n : Point2{};
}

}  // namespace

GridField compute_field(std::span<const BoundaryElement> elements, const Rect& window, double h) {
    if (!(h > 0)) throw ResolutionError("grid resolution must be positive");
    const double cx = std::ceil(window.width() / h), cy = std::ceil(window.height() / h);
    if (!(cx * cy <= static_cast<double>(kMaxOracleCells)))
        throw ResolutionError("grid of " + std::to_string(cx) + " x " + std::to_string(cy) + " cells is too large");
    GridField f;
    f.window = window;
    f.h = h;
    f.nx = std::max(1, static_cast<int>(cx));
    f.ny = std::max(1, static_cast<int>(cy));
    f.nearest.assign(static_cast<std::size_t>(f.nx) * f.ny, {kInf, -1});
    f.second.assign(f.nearest.size(), {kInf, -1});

    std::vector<double> d(elements.size());
    for (int j = 0; j < f.ny; ++j) {
        for (int i = 0; i < f.nx; ++i) {
            const Point2 q = f.center(i, j);
            GridField::Entry best{kInf, -1};
            for (std::size_t k = 0; k < elements.size(); ++k) {
                d[k] = element_distance(elements[k], q);
                if (d[k] < best.distance) best = {d[k], elements[k].id};
            }
            GridField::Entry next{kInf, -1};
            if (best.element >= 0) {
                const BoundaryElement& nb = elements[best.element];
                for (std::size_t k = 0; k < elements.size(); ++k) {
                    const int id = elements[k].id;
                    if (id == best.element || nb.adjacent_to(id)) continue;
                    if (d[k] < next.distance) next = {d[k], id};
                }
            }
            f.nearest[f.index(i, j)] = best;
            f.second[f.index(i, j)] = next;
        }
    }
    return f;
}

std::vector<ShockCell> extract_shock_cells(const GridField& field, std::span<const BoundaryElement> elements,
                                           double tol, bool normalize) {
    std::vector<ShockCell> out;
    for (int j = 0; j < field.ny; ++j) {
        for (int i = 0; i < field.nx; ++i) {
            const auto& a = field.nearest[field.index(i, j)];
            if (a.element < 0) continue;
            const BoundaryElement& ea = elements[a.element];
            const Point2 q = field.center(i, j);
            // Rivals are the owners of neighbouring cells, so a bisector only counts where
            // both of its generators actually own territory. Near-ties at shallow corners
            // otherwise flag stretches of bisector that a third element hides.
            int tried[8];
            int n_tried = 0;
            bool hit = false;
            for (int dj = -1; dj <= 1 && !hit; ++dj)
                for (int di = -1; di <= 1 && !hit; ++di) {
                    const int ni = i + di, nj = j + dj;
                    if (ni < 0 || nj < 0 || ni >= field.nx || nj >= field.ny) continue;
                    const int b = field.nearest[field.index(ni, nj)].element;
                    if (b < 0 || b == a.element || ea.adjacent_to(b)) continue;
                    if (std::find(tried, tried + n_tried, b) != tried + n_tried) continue;
                    tried[n_tried++] = b;
                    const double db = element_distance(elements[b], q);
                    if (!std::isfinite(db)) continue;
                    double gap = db - a.distance;
                    if (normalize) {
                        const double grad = norm(ray_from(ea, q) - ray_from(elements[b], q));
                        gap = grad > 0 ? gap / grad : (gap == 0 ? 0.0 : kInf);
                    }
                    hit = gap <= tol;
                }
            if (hit) out.push_back({i, j, q});
        }
    }
    return out;
}

std::vector<Point2> rasterize_links(const ShockGraph& graph, double step, const Rect& window, bool include_adjacent) {
    std::vector<Point2> out;
    for (const auto& l : graph.links) {
        for (const auto& p : l.pieces) {
            const int a = p.bisector.plus().id, b = p.bisector.minus().id;
            if (!include_adjacent && graph.elements[a].adjacent_to(b)) continue;
            const double len = p.length();
            const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
            const double s0 = p.bisector.arc_from_native(p.t_from);
            const double sign = p.t_to >= p.t_from ? 1.0 : -1.0;
            for (int k = 0; k <= n; ++k) {
                const Point2 q = p.bisector.point(p.bisector.native_from_arc(s0 + sign * len * k / n));
                if (window.contains(q)) out.push_back(q);
            }
        }
    }
    return out;
}

double directed_hausdorff(const std::vector<Point2>& from, const std::vector<Point2>& to) {
    if (from.empty()) return 0.0;
    if (to.empty()) return kInf;
    Rect b{to.front(), to.front()};
    for (const auto& p : to) {
        b.min = {std::min(b.min.x, p.x), std::min(b.min.y, p.y)};
        b.max = {std::max(b.max.x, p.x), std::max(b.max.y, p.y)};
    }
    const double cell = std::max({b.width(), b.height(), 1e-9}) / std::max(1.0, std::sqrt(double(to.size())));
    const int nx = static_cast<int>(b.width() / cell) + 1, ny = static_cast<int>(b.height() / cell) + 1;
    std::vector<std::vector<int>> grid(static_cast<std::size_t>(nx) * ny);
    auto cx = [&](double x) { return std::clamp(static_cast<int>(std::floor((x - b.min.x) / cell)), 0, nx - 1); };
    auto cy = [&](double y) { return std::clamp(static_cast<int>(std::floor((y - b.min.y) / cell)), 0, ny - 1); };
    for (std::size_t k = 0; k < to.size(); ++k) grid[static_cast<std::size_t>(cy(to[k].y)) * nx + cx(to[k].x)].push_back(int(k));

    double worst = 0.0;
    for (const auto& q : from) {
        // Distance from q to the grid's box bounds how far out the first hit can be.
        const double outside = std::hypot(std::max({b.min.x - q.x, 0.0, q.x - b.max.x}),
                                          std::max({b.min.y - q.y, 0.0, q.y - b.max.y}));
        const int ci = cx(q.x), cj = cy(q.y);
        double best = kInf;
        for (int ring = 0; ring <= std::max(nx, ny); ++ring) {
            if (ring > 0 && best <= std::max(outside, (ring - 1) * cell)) break;
            for (int j = cj - ring; j <= cj + ring; ++j) {
                if (j < 0 || j >= ny) continue;
                for (int i = ci - ring; i <= ci + ring; ++i) {
                    if (i < 0 || i >= nx) continue;
                    if (std::max(std::abs(i - ci), std::abs(j - cj)) != ring) continue;
                    for (int k : grid[static_cast<std::size_t>(j) * nx + i]) best = std::min(best, distance(q, to[k]));
                }
            }
        }
        worst = std::max(worst, best);
    }
    return worst;
}

void write_pgm(std::ostream& out, const GridField& field) {
    double top = 0.0;
    for (const auto& e : field.nearest)
        if (std::isfinite(e.distance)) top = std::max(top, e.distance);
    out << "P5\n" << field.nx << ' ' << field.ny << "\n255\n";
    // Rows top to bottom: image y grows downward in the graymap.
    for (int j = 0; j < field.ny; ++j) {
        for (int i = 0; i < field.nx; ++i) {
            const double d = field.nearest[field.index(i, j)].distance;
            const double v = std::isfinite(d) && top > 0 ? d / top : 1.0;
            out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v))));
        }
    }
}

void write_cell_list(std::ostream& out, const std::vector<ShockCell>& cells) {
    for (const auto& c : cells) out << c.i << ' ' << c.j << ' ' << c.center.x << ' ' << c.center.y << '\n';
}

}  // namespace shock
