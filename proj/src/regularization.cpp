#include "shockgraph/regularization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace shock {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroRadius = 1e-9;

}  // namespace

Rect bounding_box(double width, double height, double scale) {
    const Point2 c{width / 2, height / 2};
    const Point2 half{scale * width / 2, scale * height / 2};
    return {c - half, c + half};
}

Scene augment_with_box(const Scene& scene, double scale) {
    if (!(scale > 1.0) || !std::isfinite(scale))
        throw InvalidInputError("bounding box scale must be greater than 1");
    if (!(scene.width > 0) || !(scene.height > 0)) throw InvalidInputError("scene needs a positive image size");
    for (const auto& f : scene.fragments)
        if (f.id == kBoxFragmentId) throw InvalidInputError("fragment id -1 is reserved for the bounding box");
    const Rect box = bounding_box(scene.width, scene.height, scale);
    Scene out = scene;
    ContourFragment f;
    f.id = kBoxFragmentId;
    f.closed = true;
    f.vertices = {box.min, {box.max.x, box.min.y}, box.max, {box.min.x, box.max.y}};
    out.fragments.push_back(std::move(f));
    return out;
}

double corner_deformation(double r_tip, double psi) {
    const double s = std::sin(psi);
    return std::max(0.0, r_tip * (1.0 - s) / std::max(s, 1e-12));
}

bool touches_box(const ShockGraph& graph, const ShockLink& link) {
    for (const auto& p : link.pieces) {
        if (graph.is_box_element(p.bisector.plus().id) || graph.is_box_element(p.bisector.minus().id)) return true;
    }
    return false;
}

namespace {

// Pruning state over a fixed graph: live links, live degree, and the
// cumulative tip radius carried into each node by branches already removed.
struct Pruner {
    const ShockGraph& g;
    std::vector<char> alive;
    std::vector<int> degree;
    std::vector<double> base;

    explicit Pruner(const ShockGraph& graph)
        : g(graph), alive(graph.links.size(), 1), degree(graph.nodes.size(), 0), base(graph.nodes.size(), kInf) {
        for (const auto& l : g.links) {
            ++degree[l.from];
            ++degree[l.to];
        }
        for (const auto& n : g.nodes) base[n.id] = n.tip_radius;
    }

    // Corner spokes start on a contour vertex (zero radius) and are scored by
    // the corner-rounding displacement.
    bool corner_rooted(const ShockLink& l, double* psi) const {
        if (g.nodes[l.from].radius > kZeroRadius) return false;
        const LinkPiece& p = l.pieces.front();
        const Generator* seg = nullptr;
        if (p.bisector.plus().kind == ElementKind::Segment) seg = &p.bisector.plus();
        else if (p.bisector.minus().kind == ElementKind::Segment) seg = &p.bisector.minus();
        if (!seg) return false;
        const Point2 tangent = p.bisector.tangent(p.t_from);
        const Point2 along = normalized(seg->b - seg->a);
        *psi = std::asin(std::clamp(std::abs(cross(tangent, along)), 0.0, 1.0));
        return true;
    }

    double leaf_base(int node) const { return std::min(base[node], g.nodes[node].radius); }

    // Leaf and interior node of a leaf-side link, or {-1,-1}.
    std::pair<int, int> leaf_of(const ShockLink& l) const {
        const bool f = degree[l.from] == 1, t = degree[l.to] == 1;
        if (f && t) {
            return g.nodes[l.to].radius < g.nodes[l.from].radius ? std::pair{l.to, l.from} : std::pair{l.from, l.to};
        }
        if (f) return {l.from, l.to};
        if (t) return {l.to, l.from};
        return {-1, -1};
    }

    double score(int id) const {
        const ShockLink& l = g.links[id];
        double psi = 0.0;
        if (corner_rooted(l, &psi)) return corner_deformation(g.nodes[l.to].radius, psi);
        const auto [leaf, inner] = leaf_of(l);
        if (leaf < 0 || g.nodes[leaf].on_box) return kInf;
        return std::abs(g.nodes[inner].radius - leaf_base(leaf));
    }
};

std::vector<char> isolated_nodes(const ShockGraph& g) {
    std::vector<char> out(g.nodes.size(), 0);
    for (const auto& n : g.nodes) out[n.id] = n.links.empty();
    return out;
}

void label_isolated(ShockGraph& g) {
    for (auto& n : g.nodes)
        if (n.links.empty()) n.label = NodeLabel::Sink;
}

}  // namespace

std::vector<SaliencyScore> saliency(const ShockGraph& graph) {
    Pruner p(graph);
    std::vector<SaliencyScore> out;
    out.reserve(graph.links.size());
    for (const auto& l : graph.links) out.push_back({l.id, p.score(l.id)});
    return out;
}

void dissolve_degree_two(ShockGraph& g) {
    std::vector<char> keep = isolated_nodes(g);
    std::vector<std::vector<int>> in(g.nodes.size()), out(g.nodes.size());
    for (const auto& l : g.links) {
        out[l.from].push_back(l.id);
        in[l.to].push_back(l.id);
    }
    std::vector<char> dead(g.links.size(), 0);
    for (const auto& n : g.nodes) {
        if (in[n.id].size() != 1 || out[n.id].size() != 1) continue;
        const int a = in[n.id][0], b = out[n.id][0];
        ShockLink& la = g.links[a];
        ShockLink& lb = g.links[b];
        if (a == b || la.from == lb.to) continue;
        la.pieces.insert(la.pieces.end(), lb.pieces.begin(), lb.pieces.end());
        la.origins.insert(la.origins.end(), lb.origins.begin(), lb.origins.end());
        la.to = lb.to;
        dead[b] = 1;
        std::replace(in[lb.to].begin(), in[lb.to].end(), b, a);
        in[n.id].clear();
        out[n.id].clear();
    }
    compact(g, dead, keep);
    label_isolated(g);
}

PruneResult prune(const ShockGraph& graph, const PruneOptions& options) {
    if (!(options.lambda >= 0)) throw InvalidInputError("lambda must be non-negative");
    PruneResult result;
    Pruner p(graph);
    std::vector<char> keep = isolated_nodes(graph);

    std::vector<double> score(graph.links.size());
    std::set<std::pair<double, int>> queue;
    for (const auto& l : graph.links) {
        score[l.id] = p.score(l.id);
        queue.emplace(score[l.id], l.id);
    }
    auto rescore_around = [&](int node) {
        for (int id : graph.nodes[node].links) {
            if (!p.alive[id]) continue;
            const double s = p.score(id);
            if (s == score[id]) continue;
            queue.erase({score[id], id});
            score[id] = s;
            queue.emplace(s, id);
        }
    };

    while (!queue.empty()) {
        const auto [s, id] = *queue.begin();
        if (!(s <= options.lambda)) break;
        queue.erase(queue.begin());
        const ShockLink& l = graph.links[id];

        int interior = l.to;
        double psi = 0.0;
        if (p.corner_rooted(l, &psi)) {
            p.base[l.to] = std::min(p.base[l.to], graph.nodes[l.to].radius);
        } else {
            const auto [leaf, inner] = p.leaf_of(l);
            p.base[inner] = std::min(p.base[inner], p.leaf_base(leaf));
            interior = inner;
        }
        p.alive[id] = 0;
        --p.degree[l.from];
        --p.degree[l.to];
        if (p.degree[interior] == 0 && !graph.nodes[interior].on_box && graph.nodes[interior].radius > kZeroRadius)
            keep[interior] = 1;
        result.pruned.insert(result.pruned.end(), l.origins.begin(), l.origins.end());
        result.removed.push_back(l);
        rescore_around(l.from);
        rescore_around(l.to);
    }
    std::sort(result.pruned.begin(), result.pruned.end());

    result.graph = graph;
    for (auto& n : result.graph.nodes) n.tip_radius = p.base[n.id];
    std::vector<char> drop(graph.links.size(), 0);
    for (std::size_t i = 0; i < drop.size(); ++i) drop[i] = !p.alive[i];
    compact(result.graph, drop, keep);
    label_isolated(result.graph);
    dissolve_degree_two(result.graph);

    if (options.drop_box_links) {
        ShockGraph& g = result.graph;
        std::vector<char> box(g.links.size(), 0);
        for (const auto& l : g.links) box[l.id] = touches_box(g, l);
        compact(g, box, isolated_nodes(g));
        label_isolated(g);
        dissolve_degree_two(g);
    }
    return result;
}

}  // namespace shock
