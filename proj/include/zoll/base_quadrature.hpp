#pragma once

#include <functional>
#include <vector>

#include "zoll/surface.hpp"

namespace zoll {

/// Hints that let a product rule on M resolve a discontinuous or kinked weight: breakpoints along
/// the canonical axes and a piece label that is constant wherever the weight is smooth.
struct BaseHints {
    std::vector<double> u_breaks;
    std::vector<double> v_breaks;
    std::function<int(const ChartPoint&)> piece;
};

struct BaseQuadratureSpec {
    int nodes = 16;        // Gauss-Legendre nodes per panel and axis
    int panels_u = 8;
    int panels_v = 16;
    int max_depth = 6;     // subdivision depth for panels crossed by a piece boundary
    int leaf_nodes = 4;    // nodes per axis in subdivided cells

    BaseQuadratureSpec refined() const {
        BaseQuadratureSpec r = *this;
        r.panels_u *= 2;
        r.panels_v *= 2;
        return r;
    }
};

struct BaseNode {
    ChartPoint x;
    Vec2 uv;
    double weight;  // includes the area density
};

/// Product Gauss-Legendre rule over M in canonical coordinates, with panel edges at the hinted
/// breakpoints and recursive 2x2 subdivision of panels whose nodes see more than one piece.
std::vector<BaseNode> base_quadrature(const SurfaceModel& model, const BaseHints& hints = {},
                                      const BaseQuadratureSpec& spec = {});

}  // namespace zoll
