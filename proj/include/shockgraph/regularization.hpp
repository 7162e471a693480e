#pragma once

#include <vector>

#include "shockgraph/contour.hpp"
#include "shockgraph/shock_graph.hpp"

namespace shock {

/// Rectangle of scale * (width, height) centered on the image.
Rect bounding_box(double width, double height, double scale);

/// Appends the bounding rectangle as one closed fragment with id kBoxFragmentId.
/// Throws InvalidInputError unless scale > 1.
Scene augment_with_box(const Scene& scene, double scale = 2.0);

/// Boundary displacement needed to round a convex corner of half-angle psi
/// with an arc of radius r_tip: the corner-to-arc distance.
double corner_deformation(double r_tip, double psi);

struct SaliencyScore {
    int link = -1;
    double deformation = 0.0;  ///< +inf for links that cannot be pruned directly
};

/// Scores every link of the graph in its current state.
std::vector<SaliencyScore> saliency(const ShockGraph& graph);

struct PruneOptions {
    double lambda = 1.0;
    bool drop_box_links = false;
};

struct PruneResult {
    ShockGraph graph;
    /// Engine link ids removed by saliency pruning, ascending.
    std::vector<int> pruned;
    /// Copies of the removed links (geometry for debug rendering).
    std::vector<ShockLink> removed;
};

/// Removes leaf-side links with deformation <= lambda until nothing changes,
/// then merges links through nodes with exactly one inflow and one outflow.
PruneResult prune(const ShockGraph& graph, const PruneOptions& options = {});

/// Merges link pairs through 1-in/1-out nodes; merged links keep both origin lists.
void dissolve_degree_two(ShockGraph& graph);

/// True when a link has a bounding-box element among its generators.
bool touches_box(const ShockGraph& graph, const ShockLink& link);

}  // namespace shock
