#include <algorithm>
#include <cstring>

#include "doctest.h"
#include "shockgraph/features.hpp"
#include "shockgraph/pipeline.hpp"
#include "shockgraph/serialize.hpp"
#include "support.hpp"

using namespace shock;
using testing::dist;

namespace {

ShockGraph raw_of(const Scene& s) {
    RunConfig cfg;
    cfg.epsilon = 0;
    return run_pipeline(s, cfg).raw;
}

ShockGraph pruned_of(const Scene& s, double lambda, bool drop) {
    RunConfig cfg;
    cfg.epsilon = 0;
    cfg.lambda = lambda;
    cfg.drop_box_links = drop;
    return run_pipeline(s, cfg).pruned.graph;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool bit_equal(const GraphRecord& a, const GraphRecord& b) {
    if (a.nodes.size() != b.nodes.size() || a.links.size() != b.links.size()) return false;
    if (!same_bits(a.width, b.width) || !same_bits(a.height, b.height) || !same_bits(a.lambda, b.lambda) ||
        !same_bits(a.bbox_scale, b.bbox_scale))
        return false;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        const auto &x = a.nodes[i], &y = b.nodes[i];
        if (x.id != y.id || x.label != y.label || !same_bits(x.x, y.x) || !same_bits(x.y, y.y) || !same_bits(x.r, y.r))
            return false;
        for (int k = 0; k < kNodeFeatureLength; ++k)
            if (!same_bits(x.features[k], y.features[k])) return false;
    }
    for (std::size_t i = 0; i < a.links.size(); ++i) {
        const auto &x = a.links[i], &y = b.links[i];
        if (x.id != y.id || x.from != y.from || x.to != y.to || x.label != y.label) return false;
        for (int k = 0; k < 7; ++k)
            if (!same_bits(x.metrics[k], y.metrics[k])) return false;
        for (int k = 0; k < kLinkSamples; ++k)
            if (!same_bits(x.samples[k].x, y.samples[k].x) || !same_bits(x.samples[k].y, y.samples[k].y)) return false;
    }
    return true;
}

std::size_t count(const std::string& text, const std::string& what) {
    std::size_t n = 0;
    for (auto pos = text.find(what); pos != std::string::npos; pos = text.find(what, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("prefix lengths") {
    CHECK(populated_prefix(0) == 28);
    CHECK(populated_prefix(1) == 28);
    CHECK(populated_prefix(2) == 28);
    CHECK(populated_prefix(3) == 43);
    CHECK(populated_prefix(4) == 56);
    CHECK(populated_prefix(4) <= kNodeFeatureLength);
    CHECK_THROWS_AS(populated_prefix(5), FeatureOverflowError);
}

TEST_CASE("node vectors follow the layout") {
    std::size_t seen[5] = {};
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const ShockGraph g = pruned_of(random_scene(10, 3, seed), 0.5, false);
        for (const auto& n : g.nodes) {
            const auto f = node_features(n, g);
            const int d = static_cast<int>(n.links.size());
            ++seen[d];
            CHECK(f.degree == d);
            CHECK(f.prefix == populated_prefix(d));
            CHECK(f.layout_version == kLayoutVersion);
            CHECK(f.values[0] == n.location.x);
            CHECK(f.values[1] == n.location.y);
            CHECK(f.values[2] == n.radius);
            CHECK(f.values[3] == label_code(n.label));
            for (int k = f.prefix; k < kNodeFeatureLength; ++k) CHECK(f.values[k] == 0.0);
            // The edge blocks close the prefix, one per incident link in angle order.
            const int dd = std::max(d, 2);
            const int edge0 = f.prefix - 8 * dd;
            for (int i = 0; i < d; ++i) {
                const auto e = edge_features(g.links[n.links[i]]);
                for (int k = 0; k < 8; ++k) CHECK(f.values[edge0 + 8 * i + k] == e.values[k]);
            }
            if (d >= 3) {
                for (int i = 0; i < d; ++i) {
                    CHECK(f.values[4 + i] == n.tangents[i]);
                    CHECK(f.values[4 + d + i] == n.phis[i]);
                }
            }
        }
    }
    CHECK(seen[2] > 0);
    CHECK(seen[3] > 0);
}

TEST_CASE("rectangle axis end") {
    const ShockGraph g = raw_of(testing::rectangle_scene());
    const ShockNode* end = nullptr;
    for (const auto& n : g.nodes)
        if (dist(n.location, {6, 5}) < 1e-9) end = &n;
    REQUIRE(end != nullptr);
    CHECK(end->radius == doctest::Approx(1.0));
    REQUIRE(end->links.size() == 3);

    // The axis runs toward -x; at this node its contact rays are perpendicular to it.
    bool axis = false;
    for (std::size_t i = 0; i < end->links.size(); ++i) {
        if (std::abs(std::abs(end->tangents[i]) - M_PI) < 1e-9) {
            axis = true;
            CHECK(end->phis[i] == doctest::Approx(M_PI / 2));
        }
    }
    CHECK(axis);
    bool top = false, bottom = false;
    for (const auto& bp : end->boundary_points) {
        top = top || dist(bp.location, {6, 6}) < 1e-9;
        bottom = bottom || dist(bp.location, {6, 4}) < 1e-9;
    }
    CHECK(top);
    CHECK(bottom);

    const auto f = node_features(*end, g);
    CHECK(f.prefix == 43);
}

TEST_CASE("midline edge vector") {
    // 5 x 2 rectangle: the axis is 3 long at radius 1.
    const ShockGraph g = raw_of(testing::scene_of(10, 10, {testing::polygon(0, {{2, 4}, {7, 4}, {7, 6}, {2, 6}})}));
    const ShockLink* axis = nullptr;
    for (const auto& l : g.links) {
        const Point2 a = l.point_at_arc(0), b = l.point_at_arc(l.length);
        if (std::abs(a.y - 5) < 1e-9 && std::abs(b.y - 5) < 1e-9 && l.length > 1) axis = &l;
    }
    REQUIRE(axis != nullptr);
    const auto e = edge_features(*axis);
    CHECK(e.values[0] == doctest::Approx(3.0));
    CHECK(e.values[1] == doctest::Approx(0.0).scale(1.0));
    CHECK(e.values[2] == doctest::Approx(6.0));
    CHECK(e.values[3] == label_code(LinkLabel::Regular));
    CHECK(e.values[4] == doctest::Approx(3.0));
    CHECK(e.values[5] == doctest::Approx(0.0).scale(1.0));
    CHECK(e.values[6] == doctest::Approx(3.0));
    CHECK(e.values[7] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("parabola length and area against dense sampling") {
    const ShockGraph g = raw_of(random_scene(10, 3, 8));
    int checked = 0;
    for (const auto& l : g.links) {
        for (const auto& p : l.pieces) {
            if (p.bisector.kind() != BisectorKind::Parabola) continue;
            const auto& b = p.bisector;
            const int n = 4000;
            double len = 0.0, twice_plus = 0.0, twice_minus = 0.0;
            std::vector<Point2> s(n + 1);
            for (int k = 0; k <= n; ++k) s[k] = b.point(p.t_from + (p.t_to - p.t_from) * k / n);
            for (int k = 0; k < n; ++k) len += dist(s[k], s[k + 1]);
            // Closed polygons: shock forward, then the contact locus backward.
            auto ring_area = [&](bool plus) {
                std::vector<Point2> ring = s;
                for (int k = n; k >= 0; --k) {
                    const double t = p.t_from + (p.t_to - p.t_from) * k / n;
                    ring.push_back(plus ? b.contact_plus(t) : b.contact_minus(t));
                }
                double a = 0.0;
                for (std::size_t i = 0; i < ring.size(); ++i) {
                    const Point2 u = ring[i], v = ring[(i + 1) % ring.size()];
                    a += u.x * v.y - v.x * u.y;
                }
                return std::abs(a) / 2;
            };
            twice_plus = ring_area(true);
            twice_minus = ring_area(false);
            CHECK(p.length() == doctest::Approx(len).epsilon(1e-6));
            ShockLink one;
            one.pieces = {p};
            CHECK(link_area(one) == doctest::Approx(twice_plus + twice_minus).epsilon(1e-5));
            ++checked;
        }
    }
    CHECK(checked > 5);
}

TEST_CASE("sgtext and graphml round trips are bit exact") {
    for (std::uint64_t seed : {1u, 9u}) {
        const ShockGraph g = pruned_of(random_scene(12, 3, seed), 1.0, false);
        const GraphRecord rec = make_record(g, 1.0, 2.0);
        CHECK(rec.nodes.size() == g.nodes.size());
        CHECK(rec.links.size() == g.links.size());
        CHECK(bit_equal(parse_sgtext(to_sgtext(rec)), rec));
        CHECK(bit_equal(parse_graphml(to_graphml(rec)), rec));
        CHECK(to_sgtext(parse_sgtext(to_sgtext(rec))) == to_sgtext(rec));
    }
}

TEST_CASE("empty graph exports") {
    GraphRecord rec;
    rec.width = 10;
    rec.height = 20;
    rec.lambda = 0.5;
    rec.bbox_scale = 2;
    CHECK(bit_equal(parse_sgtext(to_sgtext(rec)), rec));
    CHECK(bit_equal(parse_graphml(to_graphml(rec)), rec));
}

TEST_CASE("malformed sgtext") {
    CHECK_THROWS_AS(parse_sgtext(""), ParseError);
    CHECK_THROWS_AS(parse_sgtext("not a graph\n"), ParseError);
    const ShockGraph g = pruned_of(testing::rectangle_scene(), 1.0, false);
    std::string text = to_sgtext(make_record(g, 1.0, 2.0));
    CHECK_THROWS_AS(parse_sgtext(text.substr(0, text.size() / 2)), ParseError);
}

TEST_CASE("square svg") {
    const ShockGraph g = pruned_of(testing::scene_of(10, 10, {testing::polygon(0, {{4, 4}, {6, 4}, {6, 6}, {4, 6}})}), 0.1, true);
    const std::string svg = to_svg(g);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count(svg, "#FF0000") == 4);
    CHECK(count(svg, "#00FF00") == g.links.size());
    CHECK(count(svg, "#808080") == 0);
}

TEST_CASE("high degree nodes are split") {
    // A regular 64-gon collapses to one center node touching every corner bisector.
    const ShockGraph raw = raw_of(testing::scene_of(10, 10, {testing::regular_polygon(0, {5, 5}, 1.0, 64)}));
    std::size_t wide = 0;
    for (const auto& n : raw.nodes) wide = std::max(wide, n.links.size());
    REQUIRE(wide > 4);
    ShockGraph g = raw;
    split_high_degree(g);
    std::size_t zero = 0;
    for (const auto& n : g.nodes) CHECK(n.links.size() <= 4);
    for (const auto& l : g.links) zero += l.length == 0.0;
    CHECK(zero > 0);
    CHECK(g.links.size() == raw.links.size() + zero);
    CHECK_NOTHROW(make_record(g, 0, 2));
    CHECK_THROWS_AS(make_record(raw, 0, 2), FeatureOverflowError);
}
