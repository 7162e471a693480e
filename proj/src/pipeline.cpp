#include "shockgraph/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "shockgraph/serialize.hpp"

namespace shock {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double segment_gap(Point2 a, Point2 b, Point2 c, Point2 d) {
    if (segments_cross_interior(a, b, c, d)) return 0.0;
    return std::min({distance_to_segment(a, c, d), distance_to_segment(b, c, d), distance_to_segment(c, a, b),
                     distance_to_segment(d, a, b)});
}

}  // namespace

void RunConfig::validate() const {
    if (!(lambda >= 0) || !std::isfinite(lambda)) throw InvalidInputError("--lambda must be a non-negative number");
    if (!(bbox_scale > 1) || !std::isfinite(bbox_scale)) throw InvalidInputError("--bbox-scale must be greater than 1");
    if (!(epsilon >= 0) || !std::isfinite(epsilon)) throw InvalidInputError("--epsilon must be non-negative");
    if (jobs < 1) throw InvalidInputError("--jobs must be at least 1");
}

PipelineResult run_pipeline(const Scene& scene, const RunConfig& config) {
    config.validate();
    const auto t0 = Clock::now();
    PipelineResult out;

    Scene simplified;
    simplified.width = scene.width;
    simplified.height = scene.height;
    for (const auto& f : scene.fragments) simplified.fragments.push_back(simplify_polyline(f, config.epsilon));
    check_no_crossings(simplified.fragments);

    const Rect box = bounding_box(scene.width, scene.height, config.bbox_scale);
    for (const auto& f : simplified.fragments)
        for (const auto& v : f.vertices)
            if (!(v.x > box.min.x && v.x < box.max.x && v.y > box.min.y && v.y < box.max.y))
                throw InvalidInputError("vertex " + to_string(v) + " of fragment " + std::to_string(f.id) +
                                        " lies outside the bounding box");
    out.scene = augment_with_box(simplified, config.bbox_scale);

    std::vector<BoundaryElement> elements = decompose(out.scene.fragments);
    out.box_elements = static_cast<std::size_t>(
        std::count_if(elements.begin(), elements.end(), [](const auto& e) { return e.fragment_id == kBoxFragmentId; }));

    EngineOptions opts;
    opts.event_budget = config.event_budget;
    opts.far_scale = 1.05;
    ShockEngine engine(std::move(elements), box, opts);
    out.raw = engine.run();
    out.raw.width = scene.width;
    out.raw.height = scene.height;
    out.stats = engine.stats();

    out.pruned = prune(out.raw, {config.lambda, config.drop_box_links});
    split_high_degree(out.pruned.graph);
    out.seconds = since(t0);
    return out;
}

std::string SceneReport::to_json() const {
    nlohmann::ordered_json j;
    j["scene"] = scene;
    j["ok"] = ok();
    j["status"] = static_cast<int>(failure);
    if (!ok()) j["error"] = error;
    j["elements"] = elements;
    j["box_elements"] = box_elements;
    j["candidates"] = candidates;
    j["realized_sources"] = realized_sources;
    j["discarded_sources"] = discarded_sources;
    j["redundant_sources"] = redundant_sources;
    j["events"] = events;
    j["raw_nodes"] = raw_nodes;
    j["raw_links"] = raw_links;
    j["nodes"] = nodes;
    j["links"] = links;
    j["pruned_links"] = pruned_links;
    j["seconds"] = seconds;
    j["outputs"] = outputs;
    return j.dump();
}

SceneReport run_scene(const RunConfig& config, const std::filesystem::path& scene_path) {
    SceneReport rep;
    rep.scene = scene_path.string();
    const auto t0 = Clock::now();
    try {
        const Scene scene = load_scene(scene_path);
        const PipelineResult res = run_pipeline(scene, config);
        rep.elements = res.stats.elements - res.box_elements;
        rep.box_elements = res.box_elements;
        rep.candidates = res.stats.candidates;
        rep.realized_sources = res.stats.realized_sources;
        rep.discarded_sources = res.stats.discarded_sources;
        rep.redundant_sources = res.stats.redundant_sources;
        rep.events = res.stats.events;
        rep.raw_nodes = res.raw.nodes.size();
        rep.raw_links = res.raw.links.size();
        rep.nodes = res.pruned.graph.nodes.size();
        rep.links = res.pruned.graph.links.size();
        rep.pruned_links = res.pruned.pruned.size();

        const std::string stem = scene_path.stem().string();
        const ShockGraph& g = res.pruned.graph;
        const GraphRecord rec = make_record(g, config.lambda, config.bbox_scale);
        auto emit = [&](const char* ext, const std::string& bytes) {
            const auto path = config.output_dir / (stem + ext);
            write_file_atomic(path, bytes);
            rep.outputs.push_back(path.string());
        };
        if (config.write_sgtext) emit(".sgtext", to_sgtext(rec));
        if (config.write_graphml) emit(".graphml", to_graphml(rec));
        if (config.write_svg) emit(".svg", to_svg(g, config.debug_svg ? &res.pruned.removed : nullptr));
    } catch (const ParseError& e) {
        rep.failure = FailureClass::Parse;
        rep.error = e.what();
    } catch (const WriteError& e) {
        rep.failure = FailureClass::Write;
        rep.error = e.what();
    } catch (const PropagationBudgetError& e) {
        rep.failure = FailureClass::Budget;
        rep.error = e.what();
    } catch (const std::exception& e) {
        rep.failure = FailureClass::InvalidInput;
        rep.error = e.what();
    }
    rep.seconds = since(t0);
    return rep;
}

// --- synthetic scenes -------------------------------------------------------

Scene random_scene(std::size_t fragments, std::size_t vertices, std::uint64_t seed) {
    if (vertices < 2) throw InvalidInputError("random fragments need at least 2 vertices");
    SceneRng rng(seed);
    const double side = 12.0 * std::sqrt(static_cast<double>(std::max<std::size_t>(1, fragments * (vertices - 1))));
    Scene scene;
    scene.width = side;
    scene.height = side;
    struct Seg {
        Point2 a, b;
    };
    std::vector<Seg> placed;
    constexpr double kClearance = 0.5;

    for (std::size_t f = 0; f < fragments; ++f) {
        bool done = false;
        for (int attempt = 0; attempt < 10000 && !done; ++attempt) {
            std::vector<Point2> pts{{rng.uniform(0.1, 0.9) * side, rng.uniform(0.1, 0.9) * side}};
            double heading = rng.uniform(0.0, 2 * kPi);
            bool ok = true;
            for (std::size_t k = 1; k < vertices; ++k) {
                if (k > 1) heading += rng.uniform(-0.6, 0.6);
                const double len = rng.uniform(2.0, 5.0);
                const Point2 next = pts.back() + Point2{std::cos(heading), std::sin(heading)} * len;
                if (next.x < 0.05 * side || next.x > 0.95 * side || next.y < 0.05 * side || next.y > 0.95 * side)
                    ok = false;
                pts.push_back(next);
            }
            for (std::size_t k = 0; ok && k + 1 < pts.size(); ++k) {
                for (const auto& s : placed)
                    if (segment_gap(pts[k], pts[k + 1], s.a, s.b) < kClearance) {
                        ok = false;
                        break;
                    }
                for (std::size_t m = k + 2; ok && m + 1 < pts.size(); ++m)
                    if (segment_gap(pts[k], pts[k + 1], pts[m], pts[m + 1]) < kClearance) ok = false;
            }
            if (!ok) continue;
            for (std::size_t k = 0; k + 1 < pts.size(); ++k) placed.push_back({pts[k], pts[k + 1]});
            ContourFragment frag;
            frag.id = static_cast<int>(f);
            frag.vertices = std::move(pts);
            scene.fragments.push_back(std::move(frag));
            done = true;
        }
        if (!done) throw Error("random scene generator could not place fragment " + std::to_string(f));
    }
    return scene;
}

Scene random_segment_scene(std::size_t elements, std::uint64_t seed) {
    return random_scene(std::max<std::size_t>(1, elements / 3), 2, seed);
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

BenchResult bench(const std::vector<std::size_t>& sizes, const RunConfig& config, std::uint64_t seed) {
    BenchResult out;
    std::vector<double> xs, ys;
    for (std::size_t n : sizes) {
        const Scene scene = augment_with_box(random_segment_scene(n, seed), config.bbox_scale);
        std::vector<BoundaryElement> elements = decompose(scene.fragments);
        const Rect box = bounding_box(scene.width, scene.height, config.bbox_scale);
        BenchRow row;
        row.requested = n;
        row.elements = static_cast<std::size_t>(std::count_if(
            elements.begin(), elements.end(), [](const auto& e) { return e.fragment_id != kBoxFragmentId; }));
        // Best of three damps scheduler noise on the small sizes.
        row.seconds = std::numeric_limits<double>::infinity();
        for (int rep = 0; rep < 3; ++rep) {
            ShockEngine engine(elements, box, {config.event_budget, 1.05});
            const auto t0 = Clock::now();
            engine.run();
            row.seconds = std::min(row.seconds, since(t0));
            row.events = engine.stats().events;
            row.candidates = engine.stats().candidates;
        }
        xs.push_back(static_cast<double>(row.elements));
        ys.push_back(row.seconds);
        out.rows.push_back(row);
    }
    out.slope = fit_loglog_slope(xs, ys);
    return out;
}

// --- golden corpus ----------------------------------------------------------

namespace {

struct Summary {
    std::size_t nodes = 0, links = 0, junctions = 0, three_inflow = 0, components = 0;
};

Summary summarize(const ShockGraph& g) {
    Summary s;
    s.nodes = g.nodes.size();
    s.links = g.links.size();
    std::vector<int> in(g.nodes.size(), 0), parent(g.nodes.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& l : g.links) {
        ++in[l.to];
        parent[find(l.from)] = find(l.to);
    }
    for (const auto& n : g.nodes) {
        if (n.label == NodeLabel::Junction) ++s.junctions;
        if (in[n.id] == 3) ++s.three_inflow;
        if (find(n.id) == n.id) ++s.components;
    }
    return s;
}

}  // namespace

std::vector<CorpusResult> verify_corpus(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw ParseError("cannot open " + (dir / "manifest.json").string());
    nlohmann::json manifest;
    try {
        in >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("manifest.json: " + std::string(e.what()));
    }

    std::vector<CorpusResult> results;
    for (const auto& entry : manifest.at("scenes")) {
        CorpusResult r;
        r.name = entry.at("name").get<std::string>();
        auto miss = [&](const std::string& what) { r.mismatches.push_back(what); };
        try {
            RunConfig cfg;
            const auto& c = entry.value("config", nlohmann::json::object());
            cfg.lambda = c.value("lambda", 1.0);
            cfg.bbox_scale = c.value("bbox_scale", 2.0);
            cfg.epsilon = c.value("epsilon", 0.0);
            cfg.drop_box_links = c.value("drop_box_links", false);
            const bool raw = c.value("graph", std::string("pruned")) == "raw";

            const PipelineResult res = run_pipeline(load_scene(dir / entry.at("file").get<std::string>()), cfg);
            const ShockGraph& g = raw ? res.raw : res.pruned.graph;
            const Summary s = summarize(g);
            const auto& ex = entry.at("expect");

            auto check_count = [&](const char* key, std::size_t got) {
                if (!ex.contains(key)) return;
                const auto want = ex.at(key).at("value").get<std::size_t>();
                if (want != got)
                    miss(std::string(key) + ": expected " + std::to_string(want) + ", got " + std::to_string(got));
            };
            check_count("nodes", s.nodes);
            check_count("links", s.links);
            check_count("junctions", s.junctions);
            check_count("three_inflow_nodes", s.three_inflow);
            check_count("components", s.components);

            if (ex.contains("located_nodes")) {
                for (const auto& want : ex.at("located_nodes")) {
                    const Point2 p{want.at("x").get<double>(), want.at("y").get<double>()};
                    const double rad = want.at("r").get<double>(), tol = want.at("tol").get<double>();
                    const bool found = std::any_of(g.nodes.begin(), g.nodes.end(), [&](const ShockNode& n) {
                        return distance(n.location, p) <= tol && std::abs(n.radius - rad) <= tol;
                    });
                    if (!found) {
                        std::ostringstream os;
                        os << "located node: expected r=" << rad << " at " << to_string(p) << " within " << tol
                           << ", none found";
                        miss(os.str());
                    }
                }
            }
        } catch (const std::exception& e) {
            miss(std::string("pipeline failed: ") + e.what());
        }
        r.ok = r.mismatches.empty();
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace shock
