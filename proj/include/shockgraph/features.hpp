#pragma once

#include <array>

#include "shockgraph/shock_graph.hpp"

namespace shock {

inline constexpr int kNodeFeatureLength = 58;
inline constexpr int kEdgeFeatureLength = 8;
inline constexpr int kLayoutVersion = 1;

class FeatureOverflowError : public Error {
public:
    using Error::Error;
};

/// Node block followed by one edge block per incident link, zero padded.
///
/// degree <= 2: [x, y, r, l, theta, phi, bp+ (x, y, theta), bp- (x, y, theta)] + 2 edge blocks  -> 28
/// degree d >= 3: [x, y, r, l, theta_1..d, phi_1..d, d x bp (x, y, theta)] + d edge blocks     -> 43, 56
/// Missing links or boundary points leave their slots at zero.
struct NodeFeatureVector {
    std::array<double, kNodeFeatureLength> values{};
    int degree = 0;
    int prefix = 0;  ///< populated prefix length; everything after is exactly 0
    int layout_version = kLayoutVersion;
};

/// (s, kappa, a, l, s_B+, kappa_B+, s_B-, kappa_B-)
struct EdgeFeatureVector {
    std::array<double, kEdgeFeatureLength> values{};
};

int label_code(NodeLabel label);
int label_code(LinkLabel label);

/// Populated prefix length for a node of the given degree (0..4).
int populated_prefix(int degree);

EdgeFeatureVector edge_features(const ShockLink& link);
/// Throws FeatureOverflowError for degree > 4.
NodeFeatureVector node_features(const ShockNode& node, const ShockGraph& graph);

}  // namespace shock
