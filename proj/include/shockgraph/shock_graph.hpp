#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "shockgraph/bisector.hpp"
#include "shockgraph/contour.hpp"

namespace shock {

enum class NodeLabel : std::uint8_t { Source = 0, Sink = 1, Junction = 2 };
enum class LinkLabel : std::uint8_t { Degenerate = 0, SemiDegenerate = 1, Regular = 2 };

const char* to_string(NodeLabel label);
const char* to_string(LinkLabel label);

/// Contact of the maximal circle at a node with one generating element.
struct BoundaryPoint {
    Point2 location;
    double tangent_angle = 0.0;  ///< tangent of the boundary at the contact
    int element = -1;
};

struct ShockNode {
    int id = 0;
    Point2 location;
    double radius = 0.0;
    NodeLabel label = NodeLabel::Source;
    /// Created where a link leaves the bounding region rather than at a shock event.
    bool on_box = false;
    /// Smallest tip radius among branches already pruned into this node (+inf if none).
    double tip_radius = std::numeric_limits<double>::infinity();
    /// Incident link ids, ordered by ascending tangent angle then id.
    std::vector<int> links;
    /// Per incident link, same order as `links`.
    std::vector<double> tangents;  ///< angle of the unit tangent pointing into the link
    std::vector<double> normals;   ///< angle of the tangent rotated a quarter turn
    std::vector<double> phis;      ///< angle between tangent and contact ray, [0, pi/2]
    std::vector<BoundaryPoint> boundary_points;
};

/// One analytic piece of a link: a bisector traversed from t_from to t_to.
struct LinkPiece {
    Bisector bisector;
    double t_from = 0.0;
    double t_to = 0.0;

    double length() const { return bisector.arc_length(t_from, t_to); }
};

/// Arc-length and curvature of the contact locus on one generator.
struct BoundarySummary {
    int element = -1;
    double arc_length = 0.0;
    double curvature = 0.0;
};

struct ShockLink {
    static constexpr int kCurvatureSamples = 16;

    int id = 0;
    int from = 0;  ///< earlier node
    int to = 0;    ///< later node
    std::vector<LinkPiece> pieces;
    /// Ids of the engine links merged into this one.
    std::vector<int> origins;

    double length = 0.0;
    std::array<double, kCurvatureSamples> curvature_samples{};
    double mean_curvature = 0.0;
    double acceleration = 0.0;
    LinkLabel label = LinkLabel::Regular;
    double area = 0.0;
    BoundarySummary plus;
    BoundarySummary minus;

    Point2 point_at_arc(double s) const;
    double radius_at_arc(double s) const;
    /// Evenly spaced samples in arc length, endpoints included.
    std::vector<Point2> samples(int count) const;
};

struct ShockGraph {
    double width = 0.0;
    double height = 0.0;
    Rect box;
    std::vector<BoundaryElement> elements;
    std::vector<ShockNode> nodes;
    std::vector<ShockLink> links;

    bool is_box_element(int id) const { return elements[id].fragment_id < 0; }
};

/// Fragment id reserved for the bounding-box fragment.
inline constexpr int kBoxFragmentId = -1;

/// Source iff all incident links leave the node, Sink iff all arrive,
/// Junction otherwise. Throws StructuralError for isolated nodes.
NodeLabel classify_node(const ShockNode& node, const std::vector<ShockLink>& links);

/// Generator contact type: two segments Regular, one point SemiDegenerate,
/// two points Degenerate. Mixed merged links take the label of their longest piece.
LinkLabel classify_link(const ShockLink& link);

/// Area swept between the link and the contact loci on both generators.
double link_area(const ShockLink& link);

/// Recomputes every derived attribute (lengths, labels, tangents, contacts, area...).
/// Isolated nodes keep the label they already carry.
void compute_attributes(ShockGraph& graph);

/// Removes links flagged in `drop`, deletes nodes left without links unless
/// flagged in `keep_isolated`, and renumbers ids. Attributes are recomputed.
void compact(ShockGraph& graph, const std::vector<char>& drop_link, const std::vector<char>& keep_isolated);

/// Breaks nodes of degree > 4 into a chain of coincident nodes joined by
/// zero-length links, so every node fits the exported feature layout. The
/// first node keeps three incident links (in angle order), middle nodes two,
/// the last node the remainder. Attributes are recomputed.
void split_high_degree(ShockGraph& graph);

}  // namespace shock
