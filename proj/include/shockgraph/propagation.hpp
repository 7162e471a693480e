#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "shockgraph/bisector.hpp"
#include "shockgraph/contour.hpp"
#include "shockgraph/element_index.hpp"
#include "shockgraph/shock_graph.hpp"

namespace shock {

class PropagationBudgetError : public Error {
public:
    using Error::Error;
};

/// Earliest point of one pair's bisector: where its shocks would form first.
struct ShockCandidate {
    Point2 location;
    double time = 0.0;
    int gen_a = -1;  ///< lower element id
    int gen_b = -1;
    std::uint8_t branch = 0;  ///< index into make_bisectors(gen_a, gen_b)
    double source_param = 0.0;
};

/// One candidate per bisector of every element pair, sorted by time (ties
/// within 1e-9 broken by generator ids, branch, then location).
std::vector<ShockCandidate> enumerate_candidates(std::span<const BoundaryElement> elements);

/// Brute-force validity: no non-generator element is closer to the candidate
/// than its formation time (within kEqEps).
bool validate_candidate(const ShockCandidate& c, std::span<const BoundaryElement> elements);

/// Tolerance used by validity decisions at radius r.
inline double validity_tolerance(double r) { return kEqEps * (1.0 + r); }

enum class LinkEnd : std::uint8_t { Junction, BoxExit, DomainEnd };

/// Result of pushing a shock along its bisector until it stops being valid.
struct PropagationResult {
    double t_end = 0.0;
    LinkEnd end = LinkEnd::BoxExit;
    int third = -1;  ///< element that reached the shock first, if any
};

struct EngineOptions {
    /// Maximum processed events; 0 selects 10 * N^2.
    std::uint64_t event_budget = 0;
    /// Propagation region as a multiple of the clip box (>= 1).
    double far_scale = 3.0;
};

struct EngineStats {
    std::size_t elements = 0;
    std::size_t candidates = 0;
    std::size_t realized_sources = 0;
    std::size_t discarded_sources = 0;
    std::size_t redundant_sources = 0;
    std::size_t shocks_propagated = 0;
    std::size_t junctions = 0;
    std::uint64_t events = 0;
};

/// Two-list shock propagation: candidate sources in time order, active shocks
/// visited first, each active shock propagated to its terminating junction.
class ShockEngine {
public:
    ShockEngine(std::vector<BoundaryElement> elements, const Rect& clip_box, EngineOptions options = {});
    ~ShockEngine();
    ShockEngine(const ShockEngine&) = delete;
    ShockEngine& operator=(const ShockEngine&) = delete;

    /// Runs to completion; links are clipped to `clip_box`.
    ShockGraph run();

    /// Propagates one shock from t_start in direction dir (+1/-1).
    PropagationResult propagate(const Bisector& bisector, double t_start, int dir) const;

    const EngineStats& stats() const { return stats_; }
    const std::vector<BoundaryElement>& elements() const { return elements_; }

private:
    struct Run;
    std::vector<BoundaryElement> elements_;
    Rect clip_;
    Rect far_;
    EngineOptions options_;
    EngineStats stats_;
    std::unique_ptr<ElementIndex> index_;
};

}  // namespace shock
