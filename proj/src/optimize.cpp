#include "zoll/optimize.hpp"

#include <gsl/gsl_multimin.h>

#include <cmath>

#include "zoll/errors.hpp"

namespace zoll::opt {

namespace {

using Objective = std::function<double(const std::vector<double>&)>;

struct Context {
    const Objective* f;
    std::vector<double> scratch;
};

double trampoline(const gsl_vector* v, void* params) {
    auto* ctx = static_cast<Context*>(params);
    for (std::size_t i = 0; i < ctx->scratch.size(); ++i) ctx->scratch[i] = gsl_vector_get(v, i);
    const double value = (*ctx->f)(ctx->scratch);
    return std::isfinite(value) ? value : GSL_POSINF;
}

}  // namespace

SimplexResult nelder_mead(const Objective& f, std::vector<double> x0, const SimplexOptions& options) {
    const std::size_t n = x0.size();
    if (n == 0) throw PreconditionError("nelder_mead: empty start point");

    Context ctx{&f, std::vector<double>(n)};
    gsl_multimin_function fn{&trampoline, n, &ctx};

    gsl_vector* x = gsl_vector_alloc(n);
    gsl_vector* step = gsl_vector_alloc(n);
    for (std::size_t i = 0; i < n; ++i) {
        gsl_vector_set(x, i, x0[i]);
        gsl_vector_set(step, i, options.initial_step);
    }
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(s, &fn, x, step);

    SimplexResult result;
    int status = GSL_CONTINUE;
    while (status == GSL_CONTINUE && result.iterations < options.max_iterations) {
        ++result.iterations;
        if (gsl_multimin_fminimizer_iterate(s) != 0) break;
        status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), options.size_tol);
    }
    result.converged = (status == GSL_SUCCESS);
    result.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.x[i] = gsl_vector_get(s->x, i);
    result.value = s->fval;

    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(step);
    gsl_vector_free(x);
    return result;
}

double golden_section_min(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_iterations) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iterations && (b - a) > tol; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace zoll::opt
