// Batch front end: scene files in, shock graphs out.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "shockgraph/pipeline.hpp"

namespace fs = std::filesystem;
using namespace shock;

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

bool is_scene_file(const fs::path& p) {
    const auto ext = p.extension().string();
    return ext == ".txt" || ext == ".scene" || ext == ".json" || ext == ".pbm";
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> out;
    for (const auto& in : inputs) {
        const fs::path p(in);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::directory_iterator(p))
                if (e.is_regular_file() && is_scene_file(e.path()) && e.path().filename() != "manifest.json")
                    found.push_back(e.path());
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(p);
        }
    }
    return out;
}

int run_batch(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) {
        std::cerr << "shockgraph: cannot create " << cfg.output_dir << ": " << ec.message() << "\n";
        return static_cast<int>(FailureClass::Write);
    }
    std::vector<SceneReport> reports(cfg.inputs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < cfg.inputs.size();) reports[i] = run_scene(cfg, cfg.inputs[i]);
    };
    const int width = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(cfg.inputs.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < width; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int status = 0;
    for (const auto& r : reports) {
        std::cout << r.to_json() << "\n";
        if (!r.ok() && status == 0) status = static_cast<int>(r.failure);
    }
    std::fprintf(stderr, "%-40s %8s %8s %8s %8s %8s %10s  %s\n", "scene", "N", "cands", "nodes", "links", "pruned",
                 "seconds", "status");
    std::size_t ok = 0;
    for (const auto& r : reports) {
        ok += r.ok();
        std::fprintf(stderr, "%-40s %8zu %8zu %8zu %8zu %8zu %10.4f  %s\n", fs::path(r.scene).filename().string().c_str(),
                     r.elements + r.box_elements, r.candidates, r.nodes, r.links, r.pruned_links, r.seconds,
                     r.ok() ? "ok" : r.error.c_str());
    }
    std::fprintf(stderr, "%zu of %zu scenes succeeded\n", ok, reports.size());
    return status;
}

int run_bench(const RunConfig& cfg, const std::vector<std::size_t>& sizes) {
    const BenchResult b = bench(sizes, cfg);
    std::printf("%10s %10s %12s %12s %12s\n", "requested", "elements", "candidates", "events", "seconds");
    for (const auto& r : b.rows)
        std::printf("%10zu %10zu %12zu %12llu %12.6f\n", r.requested, r.elements, r.candidates,
                    static_cast<unsigned long long>(r.events), r.seconds);
    if (b.rows.size() >= 2) std::printf("log-log slope: %.3f\n", b.slope);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shock graphs of contour fragments: propagation, regularization and feature export."};
    RunConfig cfg;
    std::vector<std::string> inputs;
    std::string output = ".";
    std::string formats = "sgtext,svg";
    std::string bench_sizes;
    std::string corpus;

    app.add_option("inputs", inputs, "Scene files (.txt/.scene text, .json, .pbm) or directories");
    app.add_option("-o,--output", output, "Output directory")->capture_default_str();
    app.add_option("--lambda", cfg.lambda, "Pruning threshold in pixels of boundary deformation")->capture_default_str();
    app.add_option("--bbox-scale", cfg.bbox_scale, "Bounding box size relative to the image")->capture_default_str();
    app.add_option("--epsilon", cfg.epsilon, "Polyline simplification tolerance in pixels")->capture_default_str();
    app.add_option("--format", formats, "Comma-separated subset of sgtext,graphml,svg")->capture_default_str();
    app.add_flag("--drop-box-links", cfg.drop_box_links, "Remove links generated by the bounding box after pruning");
    app.add_flag("--debug-svg", cfg.debug_svg, "Draw pruned links in gray");
    app.add_option("-j,--jobs", cfg.jobs, "Scenes processed in parallel")->capture_default_str();
    app.add_option("--bench", bench_sizes, "Benchmark random scenes of these element counts, e.g. 50,100,200");
    app.add_option("--verify-corpus", corpus, "Check the golden scenes listed in DIR/manifest.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(FailureClass::Usage);
    }

    if (const char* env = std::getenv("SHOCKGRAPH_EVENT_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (!*env || *end) {
            std::cerr << "shockgraph: SHOCKGRAPH_EVENT_BUDGET must be a non-negative integer\n";
            return static_cast<int>(FailureClass::Usage);
        }
        cfg.event_budget = v;
    }

    cfg.write_sgtext = cfg.write_graphml = cfg.write_svg = false;
    for (const auto& f : split_list(formats)) {
        if (f == "sgtext") cfg.write_sgtext = true;
        else if (f == "graphml") cfg.write_graphml = true;
        else if (f == "svg") cfg.write_svg = true;
        else {
            std::cerr << "shockgraph: unknown format '" << f << "'\n";
            return static_cast<int>(FailureClass::Usage);
        }
    }
    try {
        cfg.validate();
    } catch (const Error& e) {
        std::cerr << "shockgraph: " << e.what() << "\n";
        return static_cast<int>(FailureClass::Usage);
    }

    if (!corpus.empty()) {
        int status = 0;
        try {
            for (const auto& r : verify_corpus(corpus)) {
                std::cout << (r.ok ? "PASS " : "FAIL ") << r.name << "\n";
                for (const auto& m : r.mismatches) std::cout << "    " << m << "\n";
                if (!r.ok) status = static_cast<int>(FailureClass::InvalidInput);
            }
        } catch (const ParseError& e) {
            std::cerr << "shockgraph: " << e.what() << "\n";
            return static_cast<int>(FailureClass::Parse);
        }
        return status;
    }

    if (!bench_sizes.empty()) {
        std::vector<std::size_t> sizes;
        for (const auto& s : split_list(bench_sizes)) {
            char* end = nullptr;
            const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
            if (*end || v == 0) {
                std::cerr << "shockgraph: bad benchmark size '" << s << "'\n";
                return static_cast<int>(FailureClass::Usage);
            }
            sizes.push_back(v);
        }
        if (!std::is_sorted(sizes.begin(), sizes.end())) {
            std::cerr << "shockgraph: benchmark sizes must be ascending\n";
            return static_cast<int>(FailureClass::Usage);
        }
        return run_bench(cfg, sizes);
    }

    if (inputs.empty()) {
        std::cerr << app.help();
        return static_cast<int>(FailureClass::Usage);
    }
    cfg.output_dir = output;
    cfg.inputs = expand_inputs(inputs);
    if (cfg.inputs.empty()) {
        std::cerr << "shockgraph: no scene files found\n";
        return static_cast<int>(FailureClass::Usage);
    }
    return run_batch(cfg);
}
