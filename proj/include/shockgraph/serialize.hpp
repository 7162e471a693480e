#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "shockgraph/features.hpp"
#include "shockgraph/shock_graph.hpp"

namespace shock {

class WriteError : public Error {
public:
    using Error::Error;
};

inline constexpr int kLinkSamples = 16;

/// Flat, exported view of a graph: exactly what the text formats carry.
struct GraphRecord {
    struct Node {
        int id = 0;
        int label = 0;
        double x = 0.0, y = 0.0, r = 0.0;
        std::array<double, kNodeFeatureLength> features{};
        bool operator==(const Node&) const = default;
    };
    struct Link {
        int id = 0, from = 0, to = 0, label = 0;
        /// s, kappa, area, s_B+, kappa_B+, s_B-, kappa_B-
        std::array<double, 7> metrics{};
        std::array<Point2, kLinkSamples> samples{};
        bool operator==(const Link&) const = default;
    };

    double width = 0.0, height = 0.0, lambda = 0.0, bbox_scale = 0.0;
    std::vector<Node> nodes;
    std::vector<Link> links;
    bool operator==(const GraphRecord&) const = default;
};

GraphRecord make_record(const ShockGraph& graph, double lambda, double bbox_scale);

std::string to_sgtext(const GraphRecord& record);
/// Throws ParseError on malformed input.
GraphRecord parse_sgtext(const std::string& text);

std::string to_graphml(const GraphRecord& record);
/// Reads back the subset of GraphML written by to_graphml.
GraphRecord parse_graphml(const std::string& text);

/// Contours red (one polyline per segment), box magenta, shock links green,
/// and, when given, pruned links gray.
std::string to_svg(const ShockGraph& graph, const std::vector<ShockLink>* pruned = nullptr);

/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

}  // namespace shock
