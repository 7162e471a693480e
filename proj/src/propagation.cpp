#include "shockgraph/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>

namespace shock {

// --- candidates -------------------------------------------------------------

std::vector<ShockCandidate> enumerate_candidates(std::span<const BoundaryElement> elements) {
    std::vector<ShockCandidate> out;
    const std::size_t n = elements.size();
    out.reserve(n * (n - (n > 0 ? 1 : 0)) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto bisectors = make_bisectors(elements[i], elements[j]);
            for (std::size_t k = 0; k < bisectors.size(); ++k) {
                const Bisector& b = bisectors[k];
                const double t = b.source_param();
                if (!std::isfinite(t)) continue;
                out.push_back({b.point(t), b.radius(t), elements[i].id, elements[j].id,
                               static_cast<std::uint8_t>(k), t});
            }
        }
    }
    // Times equal to within 1e-9 count as simultaneous and fall back to generator order.
    std::sort(out.begin(), out.end(), [](const ShockCandidate& a, const ShockCandidate& b) {
        const long long ta = std::llround(a.time * 1e9), tb = std::llround(b.time * 1e9);
        return std::tie(ta, a.gen_a, a.gen_b, a.branch, a.location.x, a.location.y) <
               std::tie(tb, b.gen_a, b.gen_b, b.branch, b.location.x, b.location.y);
    });
    return out;
}

bool validate_candidate(const ShockCandidate& c, std::span<const BoundaryElement> elements) {
    const double limit = c.time - validity_tolerance(c.time);
    for (const auto& e : elements) {
        if (e.id == c.gen_a || e.id == c.gen_b) continue;
        if (element_distance(e, c.location) < limit) return false;
    }
    return true;
}

// --- propagation ------------------------------------------------------------

namespace {

// Bounding box of the quadratic curve over [a, b].
Rect curve_bounds(const PolyCurve& c, double a, double b) {
    auto range = [&](const Poly& p) {
        double lo = std::min(p(a), p(b)), hi = std::max(p(a), p(b));
        if (p.c[2] != 0.0) {
            const double v = -p.c[1] / (2.0 * p.c[2]);
            if (v > std::min(a, b) && v < std::max(a, b)) {
                lo = std::min(lo, p(v));
                hi = std::max(hi, p(v));
            }
        }
        return std::pair{lo, hi};
    };
    const auto [x0, x1] = range(c.x);
    const auto [y0, y1] = range(c.y);
    return {{x0, y0}, {x1, y1}};
}

double point_rect_distance_sq(Point2 p, const Rect& r) {
    const double dx = std::max({r.min.x - p.x, 0.0, p.x - r.max.x});
    const double dy = std::max({r.min.y - p.y, 0.0, p.y - r.max.y});
    return dx * dx + dy * dy;
}

// True when the element certainly stays farther than `reach` from every point of `r`.
bool beyond_reach(const BoundaryElement& e, const Rect& r, double reach) {
    const double reach_sq = reach * reach;
    // Gap between bounding boxes first: it is cheap and a valid lower bound.
    const double gx = std::max({r.min.x - std::max(e.a.x, e.b.x), 0.0, std::min(e.a.x, e.b.x) - r.max.x});
    const double gy = std::max({r.min.y - std::max(e.a.y, e.b.y), 0.0, std::min(e.a.y, e.b.y) - r.max.y});
    if (gx * gx + gy * gy > reach_sq) return true;
    if (e.is_point()) return false;
    if (point_rect_distance_sq(e.a, r) <= reach_sq || point_rect_distance_sq(e.b, r) <= reach_sq) return false;
    const Point2 c[4] = {r.min, {r.max.x, r.min.y}, r.max, {r.min.x, r.max.y}};
    for (int i = 0; i < 4; ++i) {
        if (distance_to_segment(c[i], e.a, e.b) <= reach) return false;
        if (segments_cross_interior(e.a, e.b, c[i], c[(i + 1) % 4])) return false;
    }
    return true;
}

// First parameter, walking from `from` toward `to`, at which element k gets
// strictly closer than the shock radius. Sign changes of the squared distance
// gap (and the segment foot entering/leaving the interior) are the only
// places this can start; the sign in between is decided on the true distances.
std::optional<double> first_crossing(const Bisector& bis, const BoundaryElement& k, double from, double to,
                                     double t_start, double skip_tol) {
    const double lo = std::min(from, to), hi = std::max(from, to);
    const PolyCurve& c = bis.curve();
    double knots[2 + 3 * kMaxRoots];
    int n = 0;
    knots[n++] = from;
    knots[n++] = to;
    Poly gap;
    if (k.is_point()) {
        const Poly dx = c.x - Poly(k.a.x), dy = c.y - Poly(k.a.y);
        gap = dx * dx + dy * dy - bis.radius_sq();
    } else {
        const Point2 e = normalized(k.b - k.a), nrm = perp(e);
        const Poly along = c.x * e.x + c.y * e.y - Poly(dot(e, k.a));
        const Poly across = c.x * nrm.x + c.y * nrm.y - Poly(dot(nrm, k.a));
        gap = across * across - bis.radius_sq();
        n += real_roots(along, lo, hi, knots + n);
        n += real_roots(along - Poly(k.length()), lo, hi, knots + n);
    }
    n += real_roots(gap, lo, hi, knots + n);

    if (from <= to) std::sort(knots, knots + n);
    else std::sort(knots, knots + n, std::greater<>());
    int m = 0;
    for (int i = 0; i < n; ++i) {
        const double t = knots[i];
        if (t != from && std::abs(t - t_start) <= skip_tol) continue;
        if (m > 0 && t == knots[m - 1]) continue;
        knots[m++] = t;
    }
    for (int i = 0; i + 1 < m; ++i) {
        const double mid = 0.5 * (knots[i] + knots[i + 1]);
        const double r = bis.radius(mid);
        const double f = element_distance(k, bis.point(mid)) - r;
        if (f < -1e-10 * (1.0 + r)) return knots[i];
    }
    return std::nullopt;
}

}  // namespace

ShockEngine::ShockEngine(std::vector<BoundaryElement> elements, const Rect& clip_box, EngineOptions options)
    : elements_(std::move(elements)), clip_(clip_box), options_(options) {
    if (elements_.empty()) throw InvalidInputError("shock engine needs at least one element");
    for (std::size_t i = 0; i < elements_.size(); ++i)
        if (elements_[i].id != static_cast<int>(i)) throw InvalidInputError("element ids must be dense and ordered");
    far_ = clip_.scaled(std::max(1.0, options_.far_scale)).expanded(1e-6 * (1.0 + clip_.width() + clip_.height()));
    Rect bounds = far_;
    for (const auto& e : elements_) {
        bounds.min.x = std::min({bounds.min.x, e.a.x, e.b.x});
        bounds.min.y = std::min({bounds.min.y, e.a.y, e.b.y});
        bounds.max.x = std::max({bounds.max.x, e.a.x, e.b.x});
        bounds.max.y = std::max({bounds.max.y, e.a.y, e.b.y});
    }
    index_ = std::make_unique<ElementIndex>(elements_, bounds);
    stats_.elements = elements_.size();
}

ShockEngine::~ShockEngine() = default;

PropagationResult ShockEngine::propagate(const Bisector& bis, double t_start, int dir) const {
    PropagationResult res;
    res.t_end = t_start;
    const auto dom = bis.bounded_domain(far_);
    if (!dom || t_start < dom->first || t_start > dom->second) return res;
    double t_limit = dir > 0 ? dom->second : dom->first;
    // Parabolas can leave the far box inside their domain.
    if (bis.kind() == BisectorKind::Parabola) {
        for (const auto& [a, b] : bis.inside_intervals(far_, dom->first, dom->second)) {
            if (t_start >= a && t_start <= b) t_limit = dir > 0 ? b : a;
        }
    }
    const double domain_end = dir > 0 ? bis.t_max() : bis.t_min();
    const bool ends_at_domain = std::isfinite(domain_end) && t_limit == domain_end;
    if ((t_limit - t_start) * dir <= 0) {
        res.end = ends_at_domain ? LinkEnd::DomainEnd : LinkEnd::BoxExit;
        return res;
    }

    const double skip_tol = 1e-9 * std::max({1.0, std::abs(t_start), bis.radius(t_start)});
    const int gp = bis.plus().id, gm = bis.minus().id;
    std::vector<int> nearby;
    double t = t_start;
    while (true) {
        const double r = bis.radius(t);
        const double step = std::max(r, index_->cell_size());
        double tb = t + dir * step;
        if ((tb - t_limit) * dir >= 0) tb = t_limit;
        const double r_max = std::max(r, bis.radius(tb));
        index_->query(curve_bounds(bis.curve(), t, tb).expanded(r_max + validity_tolerance(r_max)), nearby);
        std::sort(nearby.begin(), nearby.end());
        const Rect chunk = curve_bounds(bis.curve(), t, tb);
        const double reach = r_max + validity_tolerance(r_max);
        std::optional<double> hit;
        int who = -1;
        for (int id : nearby) {
            if (id == gp || id == gm) continue;
            if (beyond_reach(elements_[id], chunk, reach)) continue;
            const auto x = first_crossing(bis, elements_[id], t, tb, t_start, skip_tol);
            if (x && (!hit || (*x - *hit) * dir < 0)) {
                hit = x;
                who = id;
            }
        }
        if (hit) {
            res.t_end = *hit;
            res.end = LinkEnd::Junction;
            res.third = who;
            return res;
        }
        if (tb == t_limit) break;
        t = tb;
    }
    res.t_end = t_limit;
    res.end = ends_at_domain ? LinkEnd::DomainEnd : LinkEnd::BoxExit;
    return res;
}

// --- the event loop ---------------------------------------------------------

struct ShockEngine::Run {
    struct Key {
        int a, b, branch;
        auto operator<=>(const Key&) const = default;
    };
    struct Active {
        double time;
        std::uint64_t seq;
        Key key;
        Bisector bisector;
        double t;
        int dir;
    };
    struct Later {
        bool operator()(const Active& x, const Active& y) const {
            return std::tie(x.time, x.seq) > std::tie(y.time, y.seq);
        }
    };

    ShockEngine& eng;
    ShockGraph graph;
    std::map<Key, std::vector<std::pair<double, double>>> coverage;
    std::set<std::tuple<Key, int, long long>> tried;
    std::priority_queue<Active, std::vector<Active>, Later> active;
    std::map<std::pair<long long, long long>, std::vector<int>> node_cells;
    std::uint64_t seq = 0;
    Rect clip_slack;

    explicit Run(ShockEngine& e) : eng(e) {
        clip_slack = eng.clip_.expanded(1e-9 * (1.0 + eng.clip_.width() + eng.clip_.height()));
    }

    static constexpr double kCell = 1e-4;

    int node_at(Point2 p, double r, bool on_box) {
        const long long ix = std::llround(std::floor(p.x / kCell)), iy = std::llround(std::floor(p.y / kCell));
        for (long long dx = -1; dx <= 1; ++dx) {
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = node_cells.find({ix + dx, iy + dy});
                if (it == node_cells.end()) continue;
                for (int id : it->second) {
                    ShockNode& n = graph.nodes[id];
                    if (distance(n.location, p) <= kMergeEps) {
                        n.on_box = n.on_box && on_box;
                        return id;
                    }
                }
            }
        }
        ShockNode n;
        n.id = static_cast<int>(graph.nodes.size());
        n.location = p;
        n.radius = r;
        n.on_box = on_box;
        graph.nodes.push_back(n);
        node_cells[{ix, iy}].push_back(n.id);
        return n.id;
    }

    bool covered(const Key& key, double t, int dir) const {
        auto it = coverage.find(key);
        if (it == coverage.end()) return false;
        const double tol = 1e-9 * (1.0 + std::abs(t));
        for (const auto& [lo, hi] : it->second) {
            if (t < lo - tol || t > hi + tol) continue;
            if ((dir > 0 && hi > t + tol) || (dir < 0 && lo < t - tol)) return true;
        }
        return false;
    }

    bool enqueue(const Key& key, const Bisector& bis, double t, int dir) {
        if (covered(key, t, dir)) return false;
        if (!tried.emplace(key, dir, std::llround(t * 1e7)).second) return false;
        active.push({bis.radius(t), seq++, key, bis, t, dir});
        return true;
    }

    void tick() {
        if (++eng.stats_.events > budget) {
            std::ostringstream os;
            os << "propagation event budget " << budget << " exceeded: " << eng.stats_.candidates << " candidates, "
               << eng.stats_.shocks_propagated << " shocks propagated, " << active.size() << " active, "
               << graph.links.size() << " links";
            throw PropagationBudgetError(os.str());
        }
    }
    std::uint64_t budget = 0;

    void emit(const Bisector& bis, double t_start, const PropagationResult& res, int dir) {
        const double lo = std::min(t_start, res.t_end), hi = std::max(t_start, res.t_end);
        auto pieces = bis.inside_intervals(clip_slack, lo, hi);
        if (dir < 0) std::reverse(pieces.begin(), pieces.end());
        for (const auto& [a, b] : pieces) {
            const double t_from = dir > 0 ? a : b;
            const double t_to = dir > 0 ? b : a;
            if (bis.arc_length(t_from, t_to) <= 1e-9) continue;
            const bool from_box = t_from != t_start;
            const bool to_box = t_to != res.t_end || res.end == LinkEnd::BoxExit;
            const int from = node_at(bis.point(t_from), bis.radius(t_from), from_box);
            const int to = node_at(bis.point(t_to), bis.radius(t_to), to_box);
            if (from == to) continue;
            ShockLink link;
            link.id = static_cast<int>(graph.links.size());
            link.from = from;
            link.to = to;
            link.pieces.push_back({bis, t_from, t_to});
            link.origins.push_back(link.id);
            graph.links.push_back(std::move(link));
        }
    }

    void junction(Point2 q, double r, const Key& incoming) {
        std::vector<int> nearby;
        const double tol = 1e-6 * (1.0 + r);
        eng.index_->query(Rect{q, q}.expanded(r + tol), nearby);
        std::vector<int> tied;
        for (int id : nearby)
            if (std::abs(element_distance(eng.elements_[id], q) - r) <= tol) tied.push_back(id);
        std::sort(tied.begin(), tied.end());
        for (std::size_t i = 0; i < tied.size(); ++i) {
            for (std::size_t j = i + 1; j < tied.size(); ++j) {
                const auto bisectors = make_bisectors(eng.elements_[tied[i]], eng.elements_[tied[j]]);
                for (std::size_t k = 0; k < bisectors.size(); ++k) {
                    const Key key{tied[i], tied[j], static_cast<int>(k)};
                    if (key == incoming) continue;
                    const Bisector& bis = bisectors[k];
                    const double tq = bis.project(q);
                    if (distance(bis.point(tq), q) > tol) continue;
                    const double rq = bis.radius(tq);
                    for (int dir : {-1, +1}) {
                        const double t2 = tq + dir * 1e-6 * (1.0 + std::abs(tq));
                        if (!bis.in_domain(t2)) continue;
                        const double r2 = bis.radius(t2);
                        if (r2 < rq - 1e-12 * (1.0 + rq)) continue;
                        // Another tied element already closer one step out: this outflow is dead on arrival.
                        const Point2 q2 = bis.point(t2);
                        const bool blocked = std::any_of(tied.begin(), tied.end(), [&](int o) {
                            return o != key.a && o != key.b &&
                                   element_distance(eng.elements_[o], q2) < r2 - 1e-10 * (1.0 + r2);
                        });
                        if (!blocked) enqueue(key, bis, tq, dir);
                    }
                }
            }
        }
    }

    void process_active() {
        Active a = active.top();
        active.pop();
        tick();
        if (covered(a.key, a.t, a.dir)) return;
        const PropagationResult res = eng.propagate(a.bisector, a.t, a.dir);
        ++eng.stats_.shocks_propagated;
        if (a.bisector.arc_length(a.t, res.t_end) <= 1e-9) return;
        coverage[a.key].emplace_back(std::min(a.t, res.t_end), std::max(a.t, res.t_end));
        emit(a.bisector, a.t, res, a.dir);
        if (res.end != LinkEnd::BoxExit) {
            ++eng.stats_.junctions;
            junction(a.bisector.point(res.t_end), a.bisector.radius(res.t_end), a.key);
        }
    }

    void process_candidate(const ShockCandidate& c) {
        tick();
        const double limit = c.time - validity_tolerance(c.time);
        if (eng.index_->any_closer(c.location, limit, c.gen_a, c.gen_b)) {
            ++eng.stats_.discarded_sources;
            return;
        }
        if (!eng.far_.contains(c.location)) {
            ++eng.stats_.redundant_sources;
            return;
        }
        const auto bisectors = make_bisectors(eng.elements_[c.gen_a], eng.elements_[c.gen_b]);
        const Bisector& bis = bisectors.at(c.branch);
        const Key key{c.gen_a, c.gen_b, c.branch};
        bool queued = false;
        for (int dir : bis.source_directions()) queued = enqueue(key, bis, c.source_param, dir) || queued;
        if (queued) ++eng.stats_.realized_sources;
        else ++eng.stats_.redundant_sources;
    }
};

ShockGraph ShockEngine::run() {
    stats_ = EngineStats{};
    stats_.elements = elements_.size();
    Run run(*this);
    const std::uint64_t n = elements_.size();
    run.budget = options_.event_budget ? options_.event_budget : 10 * n * n;

    const std::vector<ShockCandidate> candidates = enumerate_candidates(elements_);
    stats_.candidates = candidates.size();
    std::size_t next = 0;
    while (!run.active.empty() || next < candidates.size()) {
        if (!run.active.empty()) run.process_active();
        else run.process_candidate(candidates[next++]);
    }

    ShockGraph& g = run.graph;
    g.elements = elements_;
    g.box = clip_;
    compute_attributes(g);
    return std::move(g);
}

}  // namespace shock
