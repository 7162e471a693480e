#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shockgraph/contour.hpp"
#include "shockgraph/propagation.hpp"
#include "shockgraph/regularization.hpp"

namespace shock {

struct RunConfig {
    std::vector<std::filesystem::path> inputs;
    std::filesystem::path output_dir = ".";
    double lambda = 1.0;
    double bbox_scale = 2.0;
    double epsilon = 0.8;
    bool write_sgtext = true;
    bool write_graphml = false;
    bool write_svg = true;
    bool drop_box_links = false;
    /// Draw pruned links in gray in the SVG.
    bool debug_svg = false;
    int jobs = 1;
    /// 0 keeps the engine default.
    std::uint64_t event_budget = 0;

    /// Throws InvalidInputError when a parameter is out of range.
    void validate() const;
};

/// Everything one pass over a scene produces.
struct PipelineResult {
    Scene scene;  ///< simplified fragments plus the box fragment
    std::size_t box_elements = 0;
    ShockGraph raw;
    PruneResult pruned;
    EngineStats stats;
    double seconds = 0.0;
};

/// simplify -> crossing check -> box -> decompose -> propagate -> prune.
PipelineResult run_pipeline(const Scene& scene, const RunConfig& config);

/// Failure classes double as process exit codes.
enum class FailureClass : int { None = 0, Usage = 1, Parse = 2, Write = 3, Budget = 4, InvalidInput = 5 };

struct SceneReport {
    std::string scene;
    FailureClass failure = FailureClass::None;
    std::string error;
    std::size_t elements = 0;
    std::size_t box_elements = 0;
    std::size_t candidates = 0;
    std::size_t realized_sources = 0;
    std::size_t discarded_sources = 0;
    std::size_t redundant_sources = 0;
    std::uint64_t events = 0;
    std::size_t raw_nodes = 0;
    std::size_t raw_links = 0;
    std::size_t nodes = 0;
    std::size_t links = 0;
    std::size_t pruned_links = 0;
    double seconds = 0.0;
    std::vector<std::string> outputs;

    bool ok() const { return failure == FailureClass::None; }
    /// One-line JSON record.
    std::string to_json() const;
};

/// Loads, processes and writes one scene; never throws.
SceneReport run_scene(const RunConfig& config, const std::filesystem::path& scene_path);

// --- synthetic scenes and benchmarking --------------------------------------

/// 64-bit LCG (Knuth's MMIX constants): x' = 6364136223846793005 x + 1442695040888963407 mod 2^64.
/// Uniform doubles come from the top 53 bits.
class SceneRng {
public:
    explicit SceneRng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_;
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

/// Random scene of `fragments` open polylines with `vertices` vertices each
/// (2 vertices = isolated segments). Each fragment starts at a uniform point,
/// takes steps of length U(2,5) whose heading turns by U(-0.6,0.6) rad, and is
/// rejected and redrawn if any of its segments comes within 0.5 px of an
/// accepted fragment or of itself. The image is square with side
/// 12 * sqrt(fragments * (vertices - 1)), so density stays constant.
Scene random_scene(std::size_t fragments, std::size_t vertices, std::uint64_t seed);

/// Isolated random segments giving about `elements` boundary elements (3 per segment).
Scene random_segment_scene(std::size_t elements, std::uint64_t seed);

struct BenchRow {
    std::size_t requested = 0;
    std::size_t elements = 0;
    double seconds = 0.0;
    std::uint64_t events = 0;
    std::size_t candidates = 0;
};

struct BenchResult {
    std::vector<BenchRow> rows;
    double slope = 0.0;  ///< least-squares slope of log(seconds) against log(elements)
};

/// Sizes count boundary elements of the contour (box excluded). Times cover
/// the propagation engine only.
BenchResult bench(const std::vector<std::size_t>& sizes, const RunConfig& config, std::uint64_t seed = 1);

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// --- golden corpus ----------------------------------------------------------

struct CorpusResult {
    std::string name;
    bool ok = false;
    std::vector<std::string> mismatches;  ///< "expected ... got ..." lines
};

/// Runs every scene listed in <dir>/manifest.json and compares summaries.
std::vector<CorpusResult> verify_corpus(const std::filesystem::path& dir);

}  // namespace shock
