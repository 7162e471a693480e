#include "shockgraph/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

namespace shock {

double ContourFragment::length() const {
    double total = 0.0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i + 1 < n; ++i) total += distance(vertices[i], vertices[i + 1]);
    if (closed && n > 2) total += distance(vertices.back(), vertices.front());
    return total;
}

bool BoundaryElement::adjacent_to(int other) const {
    return std::binary_search(adjacency.begin(), adjacency.end(), other);
}

double element_distance(const BoundaryElement& e, Point2 p) {
    if (e.is_point()) return distance(p, e.a);
    return distance_to_open_segment(p, e.a, e.b);
}

Point2 element_foot(const BoundaryElement& e, Point2 p) {
    if (e.is_point()) return e.a;
    const Point2 d = e.b - e.a;
    const double t = std::clamp(dot(p - e.a, d) / norm_sq(d), 0.0, 1.0);
    return e.a + d * t;
}

// --- simplification ---------------------------------------------------------

namespace {

void douglas_peucker(const std::vector<Point2>& v, std::size_t first, std::size_t last,
                     double epsilon, std::vector<char>& keep) {
    if (last <= first + 1) return;
    double best = -1.0;
    std::size_t best_i = first;
    for (std::size_t i = first + 1; i < last; ++i) {
        const double d = distance_to_segment(v[i], v[first], v[last]);
        if (d > best) {
            best = d;
            best_i = i;
        }
    }
    if (best > epsilon) {
        keep[best_i] = 1;
        douglas_peucker(v, first, best_i, epsilon, keep);
        douglas_peucker(v, best_i, last, epsilon, keep);
    }
}

}  // namespace

ContourFragment simplify_polyline(const ContourFragment& fragment, double epsilon) {
    if (epsilon < 0.0) throw InvalidInputError("simplify_polyline: negative epsilon");
    const auto& v = fragment.vertices;
    if (v.size() < 2) throw DegenerateInputError("simplify_polyline: fewer than two vertices");
    double spread = 0.0;
    for (const Point2& p : v) spread = std::max(spread, distance(p, v.front()));
    if (spread <= kGeomEps)
        throw DegenerateInputError("fragment " + std::to_string(fragment.id) +
                                   " collapses to a single point");
    if (epsilon == 0.0) return fragment;

    ContourFragment out{fragment.id, {}, fragment.closed};
    std::vector<char> keep(v.size() + 1, 0);
    if (!fragment.closed) {
        keep[0] = keep[v.size() - 1] = 1;
        douglas_peucker(v, 0, v.size() - 1, epsilon, keep);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (keep[i]) out.vertices.push_back(v[i]);
        return out;
    }

    // Closed: anchor at vertex 0, split at the farthest vertex from it.
    std::vector<Point2> ring(v.begin(), v.end());
    ring.push_back(v.front());
    std::size_t far_i = 1;
    double far_d = -1.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double d = distance(v[i], v[0]);
        if (d > far_d) {
            far_d = d;
            far_i = i;
        }
    }
    keep[0] = keep[far_i] = keep[ring.size() - 1] = 1;
    douglas_peucker(ring, 0, far_i, epsilon, keep);
    douglas_peucker(ring, far_i, ring.size() - 1, epsilon, keep);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (keep[i]) out.vertices.push_back(v[i]);
    if (out.vertices.size() < 3) {
        // A closed fragment needs an area-spanning ring; fall back to the
        // two most deviating vertices around the anchor chord.
        out.vertices = {v[0], v[far_i]};
        out.closed = false;
    }
    return out;
}

// --- mask tracing -----------------------------------------------------------

namespace {

struct GridEdge {
    int x0, y0, x1, y1;
};

}  // namespace

std::vector<ContourFragment> trace_binary_mask(const BinaryMask& mask) {
    if (mask.width <= 0 || mask.height <= 0) throw InvalidInputError("trace_binary_mask: empty mask");
    const int W = mask.width + 1;
    auto vid = [W](int x, int y) { return y * W + x; };

    // Directed unit edges with the foreground on the left (positive orientation).
    std::vector<GridEdge> edges;
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            if (!mask.at(c, r)) continue;
            if (!mask.at(c, r - 1)) edges.push_back({c, r, c + 1, r});
            if (!mask.at(c + 1, r)) edges.push_back({c + 1, r, c + 1, r + 1});
            if (!mask.at(c, r + 1)) edges.push_back({c + 1, r + 1, c, r + 1});
            if (!mask.at(c - 1, r)) edges.push_back({c, r + 1, c, r});
        }
    }
    std::multimap<int, std::size_t> outgoing;
    for (std::size_t i = 0; i < edges.size(); ++i) outgoing.emplace(vid(edges[i].x0, edges[i].y0), i);

    std::vector<char> used(edges.size(), 0);
    std::vector<ContourFragment> out;
    int next_id = 0;
    for (std::size_t start = 0; start < edges.size(); ++start) {
        if (used[start]) continue;
        std::vector<std::pair<int, int>> loop;
        std::size_t cur = start;
        while (!used[cur]) {
            used[cur] = 1;
            const GridEdge& e = edges[cur];
            loop.emplace_back(e.x0, e.y0);
            const int dx = e.x1 - e.x0, dy = e.y1 - e.y0;
            auto [lo, hi] = outgoing.equal_range(vid(e.x1, e.y1));
            std::size_t chosen = edges.size();
            int best_turn = -2;
            for (auto it = lo; it != hi; ++it) {
                if (used[it->second] && it->second != start) continue;
                const GridEdge& n = edges[it->second];
                const int turn = dx * (n.y1 - n.y0) - dy * (n.x1 - n.x0);  // +1 left, -1 right
                if (turn > best_turn) {
                    best_turn = turn;
                    chosen = it->second;
                }
            }
            if (chosen == edges.size() || chosen == start) break;
            cur = chosen;
        }
        // Drop collinear corners.
        std::vector<Point2> verts;
        const std::size_t n = loop.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = loop[(i + n - 1) % n];
            const auto& q = loop[i];
            const auto& r = loop[(i + 1) % n];
            const int c = (q.first - p.first) * (r.second - q.second) - (q.second - p.second) * (r.first - q.first);
            if (c != 0) verts.push_back({static_cast<double>(q.first), static_cast<double>(q.second)});
        }
        // Anchor at the lowest (y, x) corner for determinism.
        auto anchor = std::min_element(verts.begin(), verts.end(), [](Point2 a, Point2 b) {
            return std::tie(a.y, a.x) < std::tie(b.y, b.x);
        });
        std::rotate(verts.begin(), anchor, verts.end());
        out.push_back({next_id++, std::move(verts), true});
    }
    return out;
}

// --- validation and decomposition -------------------------------------------

void check_no_crossings(const std::vector<ContourFragment>& fragments) {
    struct Seg {
        Point2 a, b;
        int frag;
        std::size_t idx;
    };
    std::vector<Seg> segs;
    std::vector<std::pair<Point2, int>> verts;
    for (const auto& f : fragments) {
        const std::size_t n = f.vertices.size();
        for (std::size_t i = 0; i < f.edge_count(); ++i)
            segs.push_back({f.vertices[i], f.vertices[(i + 1) % n], f.id, i});
        for (const Point2& p : f.vertices) verts.emplace_back(p, f.id);
    }
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const Point2 lo{std::min(segs[i].a.x, segs[i].b.x), std::min(segs[i].a.y, segs[i].b.y)};
        const Point2 hi{std::max(segs[i].a.x, segs[i].b.x), std::max(segs[i].a.y, segs[i].b.y)};
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            const Seg& s = segs[j];
            if (std::max(s.a.x, s.b.x) < lo.x || std::min(s.a.x, s.b.x) > hi.x ||
                std::max(s.a.y, s.b.y) < lo.y || std::min(s.a.y, s.b.y) > hi.y)
                continue;
            if (segments_cross_interior(segs[i].a, segs[i].b, s.a, s.b))
                throw InvalidInputError("segments of fragments " + std::to_string(segs[i].frag) +
                                        " and " + std::to_string(s.frag) + " cross");
        }
        for (const auto& [p, frag] : verts) {
            if (p.x < lo.x - 1 || p.x > hi.x + 1 || p.y < lo.y - 1 || p.y > hi.y + 1) continue;
            if (distance_to_open_segment(p, segs[i].a, segs[i].b) <= kGeomEps)
                throw InvalidInputError("vertex " + to_string(p) + " of fragment " + std::to_string(frag) +
                                        " touches a segment of fragment " + std::to_string(segs[i].frag));
        }
    }
}

std::vector<BoundaryElement> decompose(const std::vector<ContourFragment>& fragments) {
    std::vector<BoundaryElement> elements;
    std::map<std::pair<long long, long long>, int> point_ids;
    auto key = [](Point2 p) {
        return std::pair<long long, long long>{std::llround(p.x / kGeomEps), std::llround(p.y / kGeomEps)};
    };
    auto point_for = [&](Point2 p, int frag) {
        auto [it, inserted] = point_ids.emplace(key(p), static_cast<int>(elements.size()));
        if (inserted) {
            BoundaryElement e;
            e.id = it->second;
            e.kind = ElementKind::Point;
            e.a = e.b = p;
            e.fragment_id = frag;
            elements.push_back(e);
        }
        return it->second;
    };
    auto link = [&](int u, int v) {
        elements[u].adjacency.push_back(v);
        elements[v].adjacency.push_back(u);
    };

    for (const auto& f : fragments) {
        const std::size_t n = f.vertices.size();
        std::vector<int> pids;
        pids.reserve(n);
        for (const Point2& p : f.vertices) pids.push_back(point_for(p, f.id));
        for (std::size_t i = 0; i < f.edge_count(); ++i) {
            const int p0 = pids[i], p1 = pids[(i + 1) % n];
            if (p0 == p1) continue;
            BoundaryElement s;
            s.id = static_cast<int>(elements.size());
            s.kind = ElementKind::Segment;
            s.a = elements[p0].a;
            s.b = elements[p1].a;
            s.fragment_id = f.id;
            s.start_point = p0;
            s.end_point = p1;
            elements.push_back(s);
            link(s.id, p0);
            link(s.id, p1);
        }
    }
    // Segments sharing a vertex are adjacent to each other.
    for (const auto& pe : std::vector<BoundaryElement>(elements)) {
        if (!pe.is_point()) continue;
        for (std::size_t i = 0; i < pe.adjacency.size(); ++i)
            for (std::size_t j = i + 1; j < pe.adjacency.size(); ++j) link(pe.adjacency[i], pe.adjacency[j]);
    }
    for (auto& e : elements) {
        std::sort(e.adjacency.begin(), e.adjacency.end());
        e.adjacency.erase(std::unique(e.adjacency.begin(), e.adjacency.end()), e.adjacency.end());
    }
    return elements;
}

}  // namespace shock
