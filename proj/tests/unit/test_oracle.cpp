#include <sstream>

#include "doctest.h"
#include "shockgraph/grid_oracle.hpp"
#include "shockgraph/pipeline.hpp"
#include "support.hpp"

using namespace shock;
using testing::dist;
using testing::point_element;

TEST_CASE("single point gives a radial field") {
    const std::vector<BoundaryElement> e{point_element(0, {2.0, 3.0})};
    const Rect w{{0, 0}, {5, 5}};
    const auto f = compute_field(e, w, 0.25);
    CHECK(f.nx == 20);
    CHECK(f.ny == 20);
    for (int j = 0; j < f.ny; ++j)
        for (int i = 0; i < f.nx; ++i) {
            const auto& n = f.nearest[f.index(i, j)];
            CHECK(n.element == 0);
            CHECK(n.distance == doctest::Approx(dist(f.center(i, j), {2, 3})));
            CHECK(f.second[f.index(i, j)].element == -1);
        }
    CHECK(extract_shock_cells(f, e, 0.25).empty());
}

TEST_CASE("two points") {
    const std::vector<BoundaryElement> e{point_element(0, {0, 0}), point_element(1, {2, 0})};
    // A single cell centered on the midpoint.
    const auto f = compute_field(e, {{0.5, -0.5}, {1.5, 0.5}}, 1.0);
    REQUIRE(f.nearest.size() == 1);
    CHECK(f.nearest[0].distance == doctest::Approx(1.0));
    CHECK(f.second[0].distance == doctest::Approx(1.0));
    CHECK(f.nearest[0].element != f.second[0].element);

    // The shock is the vertical line x = 1.
    const double h = 0.1;
    const auto g = compute_field(e, {{-2, -2}, {4, 2}}, h);
    const auto cells = extract_shock_cells(g, e, h);
    REQUIRE_FALSE(cells.empty());
    for (const auto& c : cells) CHECK(std::abs(c.center.x - 1.0) <= h);
    // Every row crosses the line once or twice (cell centers straddle it).
    CHECK(cells.size() >= static_cast<std::size_t>(g.ny));
    CHECK(cells.size() <= static_cast<std::size_t>(2 * g.ny));
}

TEST_CASE("resolution limits") {
    const std::vector<BoundaryElement> e{point_element(0, {0, 0})};
    CHECK_THROWS_AS(compute_field(e, {{0, 0}, {1, 1}}, 0.0), ResolutionError);
    CHECK_THROWS_AS(compute_field(e, {{0, 0}, {1, 1}}, -1.0), ResolutionError);
    CHECK_THROWS_AS(compute_field(e, {{0, 0}, {10000, 10000}}, 1.0), ResolutionError);
}

TEST_CASE("rectangle axis agrees with the analytic graph") {
    RunConfig cfg;
    cfg.epsilon = 0;
    const auto res = run_pipeline(testing::rectangle_scene(), cfg);
    const double h = 0.05;
    const Rect w{{3, 4}, {7, 6}};
    const auto field = compute_field(res.raw.elements, w, h);
    const auto cells = extract_shock_cells(field, res.raw.elements, h);
    std::vector<Point2> oracle;
    for (const auto& c : cells) oracle.push_back(c.center);
    REQUIRE_FALSE(oracle.empty());
    // The midline: every oracle cell lies on y = 5 between the two axis ends.
    for (auto p : oracle) {
        CHECK(std::abs(p.y - 5) <= h);
        CHECK(p.x >= 4 - h);
        CHECK(p.x <= 6 + h);
    }
    const auto analytic = rasterize_links(res.raw, h, w);
    CHECK(directed_hausdorff(analytic, oracle) <= 2 * h);
    CHECK(directed_hausdorff(oracle, analytic) <= 2 * h);
    // With the corner bisectors, the analytic side covers the whole interior.
    CHECK(rasterize_links(res.raw, h, w, true).size() > analytic.size());
}

TEST_CASE("directed hausdorff") {
    const std::vector<Point2> a{{0, 0}, {1, 0}}, b{{0, 0}, {5, 0}};
    CHECK(directed_hausdorff(a, b) == doctest::Approx(1.0));
    CHECK(directed_hausdorff(b, a) == doctest::Approx(4.0));
    CHECK(directed_hausdorff({}, a) == 0.0);
    CHECK(std::isinf(directed_hausdorff(a, {})));

    // Against brute force on scattered points.
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-50, 50);
    std::vector<Point2> p, q;
    for (int k = 0; k < 300; ++k) p.push_back({u(rng), u(rng)});
    for (int k = 0; k < 500; ++k) q.push_back({u(rng) * 0.3, u(rng)});
    double brute = 0.0;
    for (auto x : p) {
        double best = testing::kInf;
        for (auto y : q) best = std::min(best, dist(x, y));
        brute = std::max(brute, best);
    }
    CHECK(directed_hausdorff(p, q) == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("graymap and cell list") {
    const std::vector<BoundaryElement> e{point_element(0, {0, 0}), point_element(1, {2, 0})};
    const auto f = compute_field(e, {{-1, -1}, {3, 1}}, 0.5);
    std::ostringstream pgm;
    write_pgm(pgm, f);
    const std::string s = pgm.str();
    CHECK(s.rfind("P5\n8 4\n255\n", 0) == 0);
    CHECK(s.size() == std::string("P5\n8 4\n255\n").size() + 32);

    std::ostringstream list;
    write_cell_list(list, {{1, 2, {1.5, 2.5}}});
    CHECK(list.str() == "1 2 1.5 2.5\n");
}
