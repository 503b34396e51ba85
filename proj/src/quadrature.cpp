#include "zoll/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "zoll/errors.hpp"

namespace zoll::quad {

namespace {

// Reference rules on [-1, 1] are cached; tables are immutable once built.
const Rule& reference_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<Rule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        auto rule = std::make_unique<Rule>();
        gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n);
        rule->nodes.resize(n);
        rule->weights.resize(n);
        for (int i = 0; i < n; ++i) {
            gsl_integration_glfixed_point(-1.0, 1.0, i, &rule->nodes[i], &rule->weights[i], table);
        }
        gsl_integration_glfixed_table_free(table);
        slot = std::move(rule);
    }
    return *slot;
}

}  // namespace

Rule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw PreconditionError("gauss_legendre: n must be positive");
    const Rule& ref = reference_legendre(n);
    Rule out;
    out.nodes.resize(n);
    out.weights.resize(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        out.nodes[i] = mid + half * ref.nodes[i];
        out.weights[i] = half * ref.weights[i];
    }
    return out;
}

Rule gauss_hermite(int n) {
    if (n < 1) throw PreconditionError("gauss_hermite: n must be positive");
    gsl_integration_fixed_workspace* ws =
        gsl_integration_fixed_alloc(gsl_integration_fixed_hermite, n, 0.0, 1.0, 0.0, 0.0);
    if (ws == nullptr) throw NumericError("gauss_hermite: workspace allocation failed");
    Rule out;
    out.nodes.assign(gsl_integration_fixed_nodes(ws), gsl_integration_fixed_nodes(ws) + n);
    out.weights.assign(gsl_integration_fixed_weights(ws), gsl_integration_fixed_weights(ws) + n);
    gsl_integration_fixed_free(ws);
    return out;
}

std::vector<double> merge_breakpoints(double a, double b, std::vector<double> interior,
                                      double merge_tol) {
    std::vector<double> pts;
    pts.reserve(interior.size() + 2);
    pts.push_back(a);
    for (double x : interior) {
        if (x > a + merge_tol && x < b - merge_tol) pts.push_back(x);
    }
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double x : pts) {
        if (out.empty() || x - out.back() > merge_tol) out.push_back(x);
    }
    if (out.back() != b) out.back() = b;
    return out;
}

Rule composite_gauss(std::span<const double> breakpoints, int n, double max_panel) {
    Rule out;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel - 1e-12)));
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            Rule r = gauss_legendre(n, a + p * h, a + (p + 1) * h);
            out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
            out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
        }
    }
    return out;
}

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 double rel_tol) {
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(1000);
    gsl_function fn;
    fn.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
    fn.params = const_cast<std::function<double(double)>*>(&f);
    double result = 0.0;
    double err = 0.0;
    static const bool quiet = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)quiet;
    const int status = gsl_integration_qag(&fn, a, b, abs_tol, rel_tol, 1000, GSL_INTEG_GAUSS61, ws,
                                           &result, &err);
    gsl_integration_workspace_free(ws);
    if (status != 0 && err > 1e3 * std::max(abs_tol, rel_tol * std::abs(result))) {
        throw NumericError("adaptive quadrature did not converge");
    }
    return result;
}

}  // namespace zoll::quad
