#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "shockgraph/contour.hpp"
#include "shockgraph/pipeline.hpp"
#include "support.hpp"

using namespace shock;
using testing::dist_closed_segment;

namespace {

ContourFragment open_chain(std::vector<Point2> v) {
    ContourFragment f;
    f.vertices = std::move(v);
    return f;
}

BinaryMask mask_from(int w, int h, auto pred) {
    BinaryMask m;
    m.width = w;
    m.height = h;
    m.bits.resize(static_cast<std::size_t>(w) * h);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) m.bits[static_cast<std::size_t>(r) * w + c] = pred(c, r) ? 1 : 0;
    return m;
}

}  // namespace

TEST_CASE("collinear chain collapses to its endpoints") {
    const auto s = simplify_polyline(open_chain({{0, 0}, {1, 0}, {2, 0}}), 0.1);
    REQUIRE(s.vertices.size() == 2);
    CHECK(s.vertices[0] == Point2{0, 0});
    CHECK(s.vertices[1] == Point2{2, 0});
}

TEST_CASE("epsilon zero is the identity") {
    const auto f = open_chain({{0, 0}, {1, 0.3}, {2, -0.1}, {3, 0}});
    CHECK(simplify_polyline(f, 0.0).vertices == f.vertices);
}

TEST_CASE("half circle: every dropped vertex stays within epsilon") {
    std::vector<Point2> v;
    for (int i = 0; i < 64; ++i) v.push_back({std::cos(M_PI * i / 63), std::sin(M_PI * i / 63)});
    const auto s = simplify_polyline(open_chain(v), 0.05);
    CHECK(s.vertices.front() == v.front());
    CHECK(s.vertices.back() == v.back());
    CHECK(s.vertices.size() < v.size());
    std::set<std::pair<double, double>> kept;
    for (auto p : s.vertices) kept.insert({p.x, p.y});
    for (auto p : v) {
        if (kept.count({p.x, p.y})) continue;
        double best = 1e9;
        for (std::size_t k = 0; k + 1 < s.vertices.size(); ++k)
            best = std::min(best, dist_closed_segment(p, s.vertices[k], s.vertices[k + 1]));
        CHECK(best <= 0.05);
    }
}

TEST_CASE("closed fragments keep vertex 0") {
    auto f = testing::regular_polygon(0, {0, 0}, 5, 40);
    const auto s = simplify_polyline(f, 0.5);
    CHECK(s.closed);
    CHECK(s.vertices.front() == f.vertices.front());
}

TEST_CASE("degenerate fragment is rejected") {
    CHECK_THROWS_AS(simplify_polyline(open_chain({{1, 1}, {1, 1 + 1e-12}}), 0.1), DegenerateInputError);
}

TEST_CASE("mask tracing") {
    SUBCASE("2x2 block") {
        const auto m = mask_from(4, 4, [](int c, int r) { return c >= 1 && c <= 2 && r >= 1 && r <= 2; });
        const auto frags = trace_binary_mask(m);
        REQUIRE(frags.size() == 1);
        CHECK(frags[0].closed);
        CHECK(frags[0].length() == doctest::Approx(8.0));
    }
    SUBCASE("empty") { CHECK(trace_binary_mask(mask_from(5, 5, [](int, int) { return false; })).empty()); }
    SUBCASE("disk of radius 10") {
        auto in = [](int c, int r) { return std::hypot(c + 0.5 - 16, r + 0.5 - 16) <= 10; };
        const auto m = mask_from(32, 32, in);
        // Oracle: count foreground/background pixel edges directly.
        int edges = 0;
        for (int r = 0; r < 32; ++r)
            for (int c = 0; c < 32; ++c) {
                if (!m.at(c, r)) continue;
                edges += !m.at(c - 1, r) + !m.at(c + 1, r) + !m.at(c, r - 1) + !m.at(c, r + 1);
            }
        const auto frags = trace_binary_mask(m);
        REQUIRE(frags.size() == 1);
        CHECK(frags[0].length() == doctest::Approx(edges));
        // A staircase perimeter runs about 4/pi times the circle's, so only a loose sanity bound here.
        CHECK(frags[0].length() > 2 * M_PI * 10);
        CHECK(frags[0].length() < 1.35 * 2 * M_PI * 10);
    }
    SUBCASE("hole is a separate fragment") {
        const auto m = mask_from(7, 7, [](int c, int r) { return c >= 1 && c <= 5 && r >= 1 && r <= 5 && !(c == 3 && r == 3); });
        CHECK(trace_binary_mask(m).size() == 2);
    }
}

TEST_CASE("decompose counts and adjacency") {
    SUBCASE("open chain of 3 vertices") {
        const auto e = decompose({open_chain({{0, 0}, {1, 0}, {2, 1}})});
        int points = 0, segments = 0;
        for (const auto& x : e) (x.is_point() ? points : segments)++;
        CHECK(points == 3);
        CHECK(segments == 2);
        const auto& mid = e[1];
        REQUIRE(mid.is_point());
        int adj_segments = 0;
        for (int a : mid.adjacency) adj_segments += e[a].is_segment();
        CHECK(adj_segments == 2);
    }
    SUBCASE("closed square") {
        const auto e = decompose({testing::polygon(0, {{0, 0}, {1, 0}, {1, 1}, {0, 1}})});
        CHECK(e.size() == 8);
        for (const auto& x : e)
            if (x.is_point()) CHECK(x.adjacency.size() == 2);
    }
    SUBCASE("80 fragments: N = edges + vertices") {
        const Scene s = random_scene(80, 10, 4);
        std::size_t want = 0;
        for (const auto& f : s.fragments) want += f.edge_count() + f.vertices.size();
        CHECK(decompose(s.fragments).size() == want);
    }
}

TEST_CASE("crossing check") {
    CHECK_THROWS_AS(check_no_crossings({open_chain({{0, 0}, {2, 2}}), open_chain({{0, 2}, {2, 0}})}), InvalidInputError);
    CHECK_THROWS_AS(check_no_crossings({open_chain({{0, 0}, {2, 0}}), open_chain({{1, 0}, {1, 1}})}), InvalidInputError);
    CHECK_NOTHROW(check_no_crossings({open_chain({{0, 0}, {2, 0}}), open_chain({{0, 1}, {2, 1}})}));
}

TEST_CASE("scene text and json formats") {
    const std::string text =
        "scene 10 8\n"
        "fragment 3 closed\nv 1 1\nv 4 1\nv 4 3\n"
        "# comment\n"
        "fragment 4 open\nv 6 6\nv 7 7\n";
    std::istringstream in(text);
    const Scene s = parse_scene_text(in);
    CHECK(s.width == 10);
    CHECK(s.height == 8);
    REQUIRE(s.fragments.size() == 2);
    CHECK(s.fragments[0].closed);
    CHECK(s.fragments[0].id == 3);
    CHECK(s.fragments[1].vertices.size() == 2);

    std::ostringstream out;
    write_scene_text(out, s);
    std::istringstream back(out.str());
    const Scene t = parse_scene_text(back);
    CHECK(t.fragments[0].vertices == s.fragments[0].vertices);

    const Scene j = parse_scene_json(
        R"({"width":10,"height":8,"fragments":[{"id":3,"closed":true,"vertices":[[1,1],[4,1],[4,3]]}]})");
    CHECK(j.fragments[0].vertices == s.fragments[0].vertices);

    std::istringstream bad("scene 10\n");
    CHECK_THROWS_AS(parse_scene_text(bad), ParseError);
    CHECK_THROWS_AS(parse_scene_json("{\"width\": 1"), ParseError);
}

TEST_CASE("pbm reader") {
    std::istringstream p1("P1\n# c\n3 2\n0 1 0\n1 1 1\n");
    const auto m = read_pbm(p1);
    CHECK(m.width == 3);
    CHECK(m.at(1, 0));
    CHECK_FALSE(m.at(0, 0));
    std::string p4 = "P4\n3 2\n";
    p4 += static_cast<char>(0x40);
    p4 += static_cast<char>(0xE0);
    std::istringstream in4(p4);
    const auto n = read_pbm(in4);
    CHECK(n.bits == m.bits);
}
