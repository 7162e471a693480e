#include "shockgraph/features.hpp"

#include <algorithm>
#include <string>

namespace shock {

int label_code(NodeLabel label) { return static_cast<int>(label); }
int label_code(LinkLabel label) { return static_cast<int>(label); }

int populated_prefix(int degree) {
    if (degree < 0 || degree > 4) throw FeatureOverflowError("node degree " + std::to_string(degree) + " exceeds 4");
    const int d = std::max(degree, 2);
    const int node_side = d == 2 ? 12 : 4 + 5 * d;
    return node_side + 8 * d;
}

EdgeFeatureVector edge_features(const ShockLink& link) {
    EdgeFeatureVector e;
    e.values = {link.length,
                link.mean_curvature,
                link.area,
                static_cast<double>(label_code(link.label)),
                link.plus.arc_length,
                link.plus.curvature,
                link.minus.arc_length,
                link.minus.curvature};
    return e;
}

NodeFeatureVector node_features(const ShockNode& node, const ShockGraph& graph) {
    NodeFeatureVector f;
    f.degree = static_cast<int>(node.links.size());
    f.prefix = populated_prefix(f.degree);
    const int d = std::max(f.degree, 2);
    auto& v = f.values;
    int k = 0;
    v[k++] = node.location.x;
    v[k++] = node.location.y;
    v[k++] = node.radius;
    v[k++] = label_code(node.label);

    auto put_bp = [&](std::size_t i) {
        if (i < node.boundary_points.size()) {
            const BoundaryPoint& bp = node.boundary_points[i];
            v[k] = bp.location.x;
            v[k + 1] = bp.location.y;
            v[k + 2] = bp.tangent_angle;
        }
        k += 3;
    };

    if (d == 2) {
        // A degree-2 node carries one tangent/phi pair: the first link in angle order.
        if (!node.tangents.empty()) {
            v[k] = node.tangents[0];
            v[k + 1] = node.phis[0];
        }
        k += 2;
        put_bp(0);
        put_bp(1);
    } else {
        for (int i = 0; i < d; ++i) v[k++] = node.tangents[i];
        for (int i = 0; i < d; ++i) v[k++] = node.phis[i];
        for (int i = 0; i < d; ++i) put_bp(i);
    }
    for (int i = 0; i < d; ++i) {
        if (i < f.degree) {
            const auto e = edge_features(graph.links.at(node.links[i]));
            for (double x : e.values) v[k++] = x;
        } else {
            k += kEdgeFeatureLength;
        }
    }
    return f;
}

}  // namespace shock
