#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "doctest.h"
#include "shockgraph/pipeline.hpp"
#include "shockgraph/serialize.hpp"
#include "support.hpp"

using namespace shock;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("shockgraph_test_" + std::to_string(std::rand()) + "_" +
                                            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

fs::path write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kRectangle = "scene 10 10\nfragment 0 closed\nv 3 4\nv 7 4\nv 7 6\nv 3 6\n";
const char* kBowtie = "scene 10 10\nfragment 0 closed\nv 2 2\nv 8 8\nv 8 2\nv 2 8\n";

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string("\"") + SHOCKGRAPH_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST_CASE("config validation") {
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    c.lambda = -1;
    CHECK_THROWS_AS(c.validate(), InvalidInputError);
    c = {};
    c.bbox_scale = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidInputError);
    c = {};
    c.epsilon = -0.1;
    CHECK_THROWS_AS(c.validate(), InvalidInputError);
    c = {};
    c.jobs = 0;
    CHECK_THROWS_AS(c.validate(), InvalidInputError);
}

TEST_CASE("run_scene writes outputs") {
    TempDir tmp;
    RunConfig cfg;
    cfg.output_dir = tmp.path;
    cfg.write_graphml = true;
    const auto rep = run_scene(cfg, write(tmp.path / "rect.txt", kRectangle));
    REQUIRE(rep.ok());
    CHECK(rep.elements == 8);
    CHECK(rep.box_elements == 8);
    CHECK(rep.outputs.size() == 3);
    for (const auto& o : rep.outputs) CHECK(fs::exists(o));
    const GraphRecord rec = parse_sgtext(slurp(tmp.path / "rect.sgtext"));
    CHECK(rec.nodes.size() == rep.nodes);
    CHECK(rec.links.size() == rep.links);
    CHECK(rec.lambda == 1.0);
    CHECK(rec.bbox_scale == 2.0);
    const std::string json = rep.to_json();
    CHECK(json.find('\n') == std::string::npos);
    CHECK(json.find("\"scene\"") != std::string::npos);
}

TEST_CASE("failure classes") {
    TempDir tmp;
    RunConfig cfg;
    cfg.output_dir = tmp.path;

    CHECK(run_scene(cfg, tmp.path / "missing.txt").failure == FailureClass::Parse);
    CHECK(run_scene(cfg, write(tmp.path / "junk.txt", "scene ten\n")).failure == FailureClass::Parse);
    CHECK(run_scene(cfg, write(tmp.path / "bowtie.txt", kBowtie)).failure == FailureClass::InvalidInput);

    RunConfig tight = cfg;
    tight.event_budget = 1;
    CHECK(run_scene(tight, write(tmp.path / "rect.txt", kRectangle)).failure == FailureClass::Budget);

    RunConfig nowhere = cfg;
    nowhere.output_dir = tmp.path / "no" / "such" / "dir";
    CHECK(run_scene(nowhere, tmp.path / "rect.txt").failure == FailureClass::Write);

    RunConfig bad = cfg;
    bad.lambda = -2;
    CHECK(run_scene(bad, tmp.path / "rect.txt").failure == FailureClass::InvalidInput);
}

TEST_CASE("scene rng") {
    SceneRng a(42), b(42), c(43);
    for (int k = 0; k < 100; ++k) {
        const auto x = a.next();
        CHECK(x == b.next());
        CHECK(x != c.next());
    }
    // The recurrence by hand from seed 0.
    SceneRng z(0);
    CHECK(z.next() == 1442695040888963407ULL);
    CHECK(z.next() == 1442695040888963407ULL * 6364136223846793005ULL + 1442695040888963407ULL);
    SceneRng u(5);
    for (int k = 0; k < 1000; ++k) {
        const double v = u.uniform();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("random scenes are reproducible and well formed") {
    const Scene a = random_scene(12, 3, 7), b = random_scene(12, 3, 7);
    REQUIRE(a.fragments.size() == 12);
    CHECK(a.width == doctest::Approx(12 * std::sqrt(24.0)));
    for (std::size_t i = 0; i < a.fragments.size(); ++i) {
        CHECK(a.fragments[i].vertices.size() == 3);
        CHECK_FALSE(a.fragments[i].closed);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(a.fragments[i].vertices[k].x == b.fragments[i].vertices[k].x);
            CHECK(a.fragments[i].vertices[k].y == b.fragments[i].vertices[k].y);
        }
        for (std::size_t k = 0; k + 1 < 3; ++k) {
            const double step = testing::dist(a.fragments[i].vertices[k], a.fragments[i].vertices[k + 1]);
            CHECK(step >= 2.0);
            CHECK(step <= 5.0);
        }
    }
}

TEST_CASE("log-log slope") {
    std::vector<double> x{10, 20, 40, 80}, y;
    for (double v : x) y.push_back(3.0 * v * v);
    CHECK(fit_loglog_slope(x, y) == doctest::Approx(2.0));
    y.clear();
    for (double v : x) y.push_back(0.5 * std::pow(v, 1.5));
    CHECK(fit_loglog_slope(x, y) == doctest::Approx(1.5));
}

TEST_CASE("command line") {
    TempDir tmp;
    const fs::path log = tmp.path / "log.txt";
    const fs::path scene = write(tmp.path / "rect.txt", kRectangle);
    const fs::path out = tmp.path / "out";

    CHECK(run_cli("--help", log) == 0);
    CHECK(run_cli("--no-such-flag", log) == 1);
    CHECK(run_cli("--lambda -1 \"" + scene.string() + "\"", log) == 1);

    CHECK(run_cli("-o \"" + out.string() + "\" --format sgtext,graphml,svg \"" + scene.string() + "\"", log) == 0);
    CHECK(fs::exists(out / "rect.sgtext"));
    CHECK(fs::exists(out / "rect.graphml"));
    CHECK(fs::exists(out / "rect.svg"));
    CHECK(slurp(log).find("\"scene\"") != std::string::npos);

    const fs::path junk = write(tmp.path / "junk.txt", "scene\n");
    CHECK(run_cli("-o \"" + out.string() + "\" \"" + junk.string() + "\"", log) == 2);
    const fs::path bowtie = write(tmp.path / "bowtie.txt", kBowtie);
    CHECK(run_cli("-o \"" + out.string() + "\" \"" + bowtie.string() + "\"", log) == 5);

    CHECK(run_cli("--bench 20,40", log) == 0);
    CHECK(slurp(log).find("log-log slope") != std::string::npos);

    CHECK(run_cli(std::string("--verify-corpus \"") + SHOCKGRAPH_CORPUS + "\"", log) == 0);
    CHECK(slurp(log).find("FAIL") == std::string::npos);
}
