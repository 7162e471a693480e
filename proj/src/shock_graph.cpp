#include "shockgraph/shock_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace shock {

const char* to_string(NodeLabel label) {
    switch (label) {
        case NodeLabel::Source: return "source";
        case NodeLabel::Sink: return "sink";
        case NodeLabel::Junction: return "junction";
    }
    return "?";
}

const char* to_string(LinkLabel label) {
    switch (label) {
        case LinkLabel::Degenerate: return "degenerate";
        case LinkLabel::SemiDegenerate: return "semi-degenerate";
        case LinkLabel::Regular: return "regular";
    }
    return "?";
}

namespace {

// Native parameter reached after walking `ds` of arc from the start of a piece.
double param_after(const LinkPiece& piece, double ds) {
    const double s0 = piece.bisector.arc_from_native(piece.t_from);
    const double sign = piece.t_to >= piece.t_from ? 1.0 : -1.0;
    const double t = piece.bisector.native_from_arc(s0 + sign * ds);
    return std::clamp(t, std::min(piece.t_from, piece.t_to), std::max(piece.t_from, piece.t_to));
}

// Locates arc position s on a multi-piece link.
std::pair<const LinkPiece*, double> locate(const ShockLink& link, double s) {
    if (link.pieces.empty()) throw StructuralError("link without pieces");
    double left = std::max(0.0, s);
    for (const auto& p : link.pieces) {
        const double len = p.length();
        if (left <= len || &p == &link.pieces.back()) return {&p, param_after(p, std::min(left, len))};
        left -= len;
    }
    return {&link.pieces.back(), link.pieces.back().t_to};
}

Point2 travel_tangent(const LinkPiece& p, double t) {
    const Point2 v = p.bisector.tangent(t);
    return p.t_to >= p.t_from ? v : v * -1.0;
}

double wrap_angle(double a) {
    while (a <= -kPi) a += 2 * kPi;
    while (a > kPi) a -= 2 * kPi;
    return a;
}

double turning(const LinkPiece& p) {
    const Point2 a = travel_tangent(p, p.t_from), b = travel_tangent(p, p.t_to);
    return std::abs(std::atan2(cross(a, b), dot(a, b)));
}

// Exact integral of x dy - y dx along the quadratic curve between t0 and t1.
double curve_shoelace(const PolyCurve& c, double t0, double t1) {
    const Poly f = c.x * c.y.derivative() - c.y * c.x.derivative();
    double acc0 = 0.0, acc1 = 0.0;
    for (int i = Poly::kMaxDegree; i >= 0; --i) {
        acc0 += f.c[i] * std::pow(t0, i + 1) / (i + 1);
        acc1 += f.c[i] * std::pow(t1, i + 1) / (i + 1);
    }
    return acc1 - acc0;
}

double chord(Point2 a, Point2 b) { return cross(a, b); }

}  // namespace

Point2 ShockLink::point_at_arc(double s) const {
    const auto [piece, t] = locate(*this, s);
    return piece->bisector.point(t);
}

double ShockLink::radius_at_arc(double s) const {
    const auto [piece, t] = locate(*this, s);
    return piece->bisector.radius(t);
}

std::vector<Point2> ShockLink::samples(int count) const {
    std::vector<Point2> out;
    if (count <= 0) return out;
    double total = 0.0;
    for (const auto& p : pieces) total += p.length();
    for (int i = 0; i < count; ++i) {
        const double s = count == 1 ? 0.0 : total * i / (count - 1);
        out.push_back(point_at_arc(s));
    }
    return out;
}

NodeLabel classify_node(const ShockNode& node, const std::vector<ShockLink>& links) {
    if (node.links.empty()) throw StructuralError("node " + std::to_string(node.id) + " has no incident links");
    bool any_in = false, any_out = false;
    for (int id : node.links) {
        const ShockLink& l = links.at(id);
        if (l.from == node.id) any_out = true;
        if (l.to == node.id) any_in = true;
    }
    if (any_out && !any_in) return NodeLabel::Source;
    if (any_in && !any_out) return NodeLabel::Sink;
    return NodeLabel::Junction;
}

LinkLabel classify_link(const ShockLink& link) {
    if (link.pieces.empty()) throw StructuralError("link without pieces");
    const LinkPiece* longest = &link.pieces.front();
    for (const auto& p : link.pieces)
        if (p.length() > longest->length()) longest = &p;
    const int points = (longest->bisector.plus().kind == ElementKind::Point) +
                       (longest->bisector.minus().kind == ElementKind::Point);
    return points == 0 ? LinkLabel::Regular : points == 1 ? LinkLabel::SemiDegenerate : LinkLabel::Degenerate;
}

double link_area(const ShockLink& link) {
    double total = 0.0;
    for (const auto& p : link.pieces) {
        const Bisector& b = p.bisector;
        const Point2 p0 = b.point(p.t_from), p1 = b.point(p.t_to);
        const double along = curve_shoelace(b.curve(), p.t_from, p.t_to);
        // Contact loci are straight (or a single point), so each side closes with three chords.
        for (int side = 0; side < 2; ++side) {
            const Point2 c0 = side == 0 ? b.contact_plus(p.t_from) : b.contact_minus(p.t_from);
            const Point2 c1 = side == 0 ? b.contact_plus(p.t_to) : b.contact_minus(p.t_to);
            const double twice = along + chord(p1, c1) + chord(c1, c0) + chord(c0, p0);
            total += 0.5 * std::abs(twice);
        }
    }
    return total;
}

void compute_attributes(ShockGraph& graph) {
    for (auto& n : graph.nodes) {
        n.links.clear();
        n.tangents.clear();
        n.normals.clear();
        n.phis.clear();
        n.boundary_points.clear();
    }

    for (auto& l : graph.links) {
        if (l.pieces.empty()) throw StructuralError("link " + std::to_string(l.id) + " has no pieces");
        l.length = 0.0;
        double turn = 0.0;
        for (const auto& p : l.pieces) {
            l.length += p.length();
            turn += turning(p);
        }
        const bool straight = std::none_of(l.pieces.begin(), l.pieces.end(), [](const LinkPiece& p) {
            return p.bisector.kind() == BisectorKind::Parabola;
        });
        for (int i = 0; i < ShockLink::kCurvatureSamples; ++i) {
            if (straight) {
                l.curvature_samples[i] = 0.0;
                continue;
            }
            const double s = l.length * i / (ShockLink::kCurvatureSamples - 1);
            const auto [piece, t] = locate(l, s);
            l.curvature_samples[i] = piece->bisector.curvature(t);
        }
        l.mean_curvature = l.length > 0 ? turn / l.length : 0.0;

        const LinkPiece& first = l.pieces.front();
        const LinkPiece& last = l.pieces.back();
        const double f0 = std::abs(first.bisector.flow(first.t_from));
        const double f1 = std::abs(last.bisector.flow(last.t_to));
        const double r0 = first.bisector.radius(first.t_from), r1 = last.bisector.radius(last.t_to);
        l.acceleration = 0.0;
        if (f0 > 1e-12 && f1 > 1e-12 && std::abs(r1 - r0) > 1e-12) l.acceleration = (1.0 / f1 - 1.0 / f0) / (r1 - r0);

        l.label = classify_link(l);
        l.area = link_area(l);

        l.plus = {first.bisector.plus().id, 0.0, 0.0};
        l.minus = {first.bisector.minus().id, 0.0, 0.0};
        for (const auto& p : l.pieces) {
            l.plus.arc_length += distance(p.bisector.contact_plus(p.t_from), p.bisector.contact_plus(p.t_to));
            l.minus.arc_length += distance(p.bisector.contact_minus(p.t_from), p.bisector.contact_minus(p.t_to));
        }
    }

    struct Incidence {
        double angle;
        int link;
        double phi;
        const LinkPiece* piece;
        double t;
    };
    std::vector<std::vector<Incidence>> inc(graph.nodes.size());
    for (const auto& l : graph.links) {
        const LinkPiece& first = l.pieces.front();
        const LinkPiece& last = l.pieces.back();
        const Point2 out = travel_tangent(first, first.t_from);
        const Point2 in = travel_tangent(last, last.t_to) * -1.0;
        inc.at(l.from).push_back({angle_of(out), l.id, first.bisector.half_angle(first.t_from), &first, first.t_from});
        inc.at(l.to).push_back({angle_of(in), l.id, last.bisector.half_angle(last.t_to), &last, last.t_to});
    }

    for (auto& n : graph.nodes) {
        auto& list = inc[n.id];
        std::sort(list.begin(), list.end(),
                  [](const Incidence& a, const Incidence& b) { return std::tie(a.angle, a.link) < std::tie(b.angle, b.link); });
        std::map<int, BoundaryPoint> contacts;
        for (const auto& e : list) {
            n.links.push_back(e.link);
            n.tangents.push_back(e.angle);
            n.normals.push_back(wrap_angle(e.angle + kPi / 2));
            n.phis.push_back(e.phi);
            const Bisector& b = e.piece->bisector;
            for (int side = 0; side < 2; ++side) {
                const Generator& g = side == 0 ? b.plus() : b.minus();
                if (contacts.count(g.id)) continue;
                BoundaryPoint bp;
                bp.element = g.id;
                bp.location = side == 0 ? b.contact_plus(e.t) : b.contact_minus(e.t);
                if (g.kind == ElementKind::Segment) {
                    bp.tangent_angle = angle_of(g.b - g.a);
                } else {
                    const Point2 ray = g.a - n.location;
                    bp.tangent_angle = norm(ray) > kGeomEps ? wrap_angle(angle_of(ray) + kPi / 2) : 0.0;
                }
                contacts.emplace(g.id, bp);
            }
        }
        for (const auto& [id, bp] : contacts) n.boundary_points.push_back(bp);
        std::stable_sort(n.boundary_points.begin(), n.boundary_points.end(),
                         [&](const BoundaryPoint& a, const BoundaryPoint& b) {
                             const Point2 ra = a.location - n.location, rb = b.location - n.location;
                             const double aa = norm(ra) > kGeomEps ? angle_of(ra) : 0.0;
                             const double ab = norm(rb) > kGeomEps ? angle_of(rb) : 0.0;
                             return aa < ab;
                         });
        if (!n.links.empty()) n.label = classify_node(n, graph.links);
    }
}

void compact(ShockGraph& graph, const std::vector<char>& drop_link, const std::vector<char>& keep_isolated) {
    std::vector<char> used(graph.nodes.size(), 0);
    for (const auto& l : graph.links) {
        if (l.id < static_cast<int>(drop_link.size()) && drop_link[l.id]) continue;
        used[l.from] = used[l.to] = 1;
    }
    std::vector<int> remap(graph.nodes.size(), -1);
    std::vector<ShockNode> nodes;
    for (auto& n : graph.nodes) {
        const bool keep = used[n.id] || (n.id < static_cast<int>(keep_isolated.size()) && keep_isolated[n.id]);
        if (!keep) continue;
        remap[n.id] = static_cast<int>(nodes.size());
        n.id = remap[n.id];
        nodes.push_back(std::move(n));
    }
    std::vector<ShockLink> links;
    for (auto& l : graph.links) {
        if (l.id < static_cast<int>(drop_link.size()) && drop_link[l.id]) continue;
        l.id = static_cast<int>(links.size());
        l.from = remap[l.from];
        l.to = remap[l.to];
        links.push_back(std::move(l));
    }
    graph.nodes = std::move(nodes);
    graph.links = std::move(links);
    compute_attributes(graph);
}

void split_high_degree(ShockGraph& graph) {
    bool changed = false;
    const std::size_t original = graph.nodes.size();
    for (std::size_t id = 0; id < original; ++id) {
        const std::vector<int> incident = graph.nodes[id].links;
        const std::size_t d = incident.size();
        if (d <= 4) continue;
        changed = true;
        std::size_t next = 3;
        int prev = static_cast<int>(id);
        while (next < d) {
            const std::size_t take = d - next <= 3 ? d - next : 2;
            ShockNode copy = graph.nodes[id];
            copy.id = static_cast<int>(graph.nodes.size());
            const int here = copy.id;
            graph.nodes.push_back(std::move(copy));
            for (std::size_t k = next; k < next + take; ++k) {
                ShockLink& l = graph.links[incident[k]];
                if (l.from == static_cast<int>(id)) l.from = here;
                if (l.to == static_cast<int>(id)) l.to = here;
            }
            // Connector: the moved link's own bisector, pinned at the shared point.
            const ShockLink& ref = graph.links[incident[next]];
            LinkPiece piece = ref.from == here ? ref.pieces.front() : ref.pieces.back();
            piece.t_from = piece.t_to = ref.from == here ? ref.pieces.front().t_from : ref.pieces.back().t_to;
            ShockLink connector;
            connector.id = static_cast<int>(graph.links.size());
            connector.from = prev;
            connector.to = here;
            connector.pieces.push_back(std::move(piece));
            graph.links.push_back(std::move(connector));
            prev = here;
            next += take;
        }
    }
    if (changed) compute_attributes(graph);
}

}  // namespace shock
