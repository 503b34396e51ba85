#include "zoll/base_quadrature.hpp"

#include <algorithm>

#include "zoll/quadrature.hpp"

namespace zoll {

namespace {

struct Builder {
    const SurfaceModel& model;
    const BaseHints& hints;
    const BaseQuadratureSpec& spec;
    std::vector<BaseNode>& out;

    void emit(double u0, double u1, double v0, double v1, int n) {
        const quad::Rule ru = quad::gauss_legendre(n, u0, u1);
        const quad::Rule rv = quad::gauss_legendre(n, v0, v1);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const Vec2 uv{ru.nodes[i], rv.nodes[j]};
                out.push_back({model.from_canonical(uv), uv,
                               ru.weights[i] * rv.weights[j] * model.area_density(uv)});
            }
        }
    }

    bool crossed(double u0, double u1, double v0, double v1, int n) const {
        if (!hints.piece) return false;
        // Probe on the nodes of the cell plus its corners and edge midpoints.
        const quad::Rule ru = quad::gauss_legendre(n, u0, u1);
        const quad::Rule rv = quad::gauss_legendre(n, v0, v1);
        std::vector<double> us = ru.nodes, vs = rv.nodes;
        // Corners are pulled slightly inside so that a boundary lying on a panel edge does not count.
        const double eu = 1e-9 * (u1 - u0), ev = 1e-9 * (v1 - v0);
        us.insert(us.end(), {u0 + eu, 0.5 * (u0 + u1), u1 - eu});
        vs.insert(vs.end(), {v0 + ev, 0.5 * (v0 + v1), v1 - ev});
        bool first = true;
        int label = 0;
        for (double u : us) {
            for (double v : vs) {
                const int p = hints.piece(model.from_canonical({u, v}));
                if (first) {
                    label = p;
                    first = false;
                } else if (p != label) {
                    return true;
                }
            }
        }
        return false;
    }

    void cell(double u0, double u1, double v0, double v1, int depth) {
        const int n = depth == 0 ? spec.nodes : spec.leaf_nodes;
        if (depth < spec.max_depth && crossed(u0, u1, v0, v1, n)) {
            const double um = 0.5 * (u0 + u1), vm = 0.5 * (v0 + v1);
            cell(u0, um, v0, vm, depth + 1);
            cell(um, u1, v0, vm, depth + 1);
            cell(u0, um, vm, v1, depth + 1);
            cell(um, u1, vm, v1, depth + 1);
            return;
        }
        emit(u0, u1, v0, v1, n);
    }
};

std::vector<double> panel_edges(double a, double b, const std::vector<double>& breaks, int panels) {
    std::vector<double> pts = breaks;
    for (int i = 1; i < panels; ++i) pts.push_back(a + (b - a) * i / panels);
    return quad::merge_breakpoints(a, b, std::move(pts), 1e-12 * (b - a));
}

}  // namespace

std::vector<BaseNode> base_quadrature(const SurfaceModel& model, const BaseHints& hints,
                                      const BaseQuadratureSpec& spec) {
    const auto [lo, hi] = model.canonical_domain();
    const std::vector<double> ue = panel_edges(lo[0], hi[0], hints.u_breaks, spec.panels_u);
    const std::vector<double> ve = panel_edges(lo[1], hi[1], hints.v_breaks, spec.panels_v);
    std::vector<BaseNode> out;
    out.reserve((ue.size() - 1) * (ve.size() - 1) * spec.nodes * spec.nodes);
    Builder b{model, hints, spec, out};
    for (std::size_t i = 0; i + 1 < ue.size(); ++i) {
        for (std::size_t j = 0; j + 1 < ve.size(); ++j) b.cell(ue[i], ue[i + 1], ve[j], ve[j + 1], 0);
    }
    return out;
}

}  // namespace zoll
