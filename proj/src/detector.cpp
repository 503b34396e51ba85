#include "zoll/detector.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "zoll/errors.hpp"
#include "zoll/surface.hpp"

namespace zoll {

std::vector<double> distinct_values(std::vector<double> values, double tol) {
    for (double v : values) {
        if (!std::isfinite(v)) throw PreconditionError("eigenvalue list contains a non-finite value");
    }
    std::sort(values.begin(), values.end());
    std::vector<double> out;
    for (double v : values) {
        if (out.empty() || v - out.back() > tol) out.push_back(v);
    }
    return out;
}

std::vector<double> upper_part(const std::vector<double>& sorted, double lower_fraction) {
    const auto skip = static_cast<std::size_t>(std::floor(std::clamp(lower_fraction, 0.0, 1.0) * sorted.size()));
    return {sorted.begin() + static_cast<std::ptrdiff_t>(std::min(skip, sorted.size())), sorted.end()};
}

SigmaHistogram sigma_histogram(const std::vector<double>& spectrum, double window, int bins, double lower_fraction,
                               double merge_tol) {
    if (!(window > 0.0) || bins < 1) throw PreconditionError("histogram needs a positive window and bin count");
    const std::vector<double> all = distinct_values(spectrum, merge_tol);
    if (all.size() < 2) throw PreconditionError("sigma histogram needs at least two distinct eigenvalues");
    std::vector<double> v = upper_part(all, lower_fraction);
    if (v.size() < 2) v = all;
    SigmaHistogram h;
    h.window = window;
    h.used_values = v.size();
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (int b = 0; b <= bins; ++b) h.edges.push_back(window * b / bins);
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size() && v[j] - v[i] <= window; ++j) {
            const double d = v[j] - v[i];
            const int b = std::min(bins - 1, static_cast<int>(d * bins / window));
            ++h.counts[static_cast<std::size_t>(b)];
        }
    }
    const auto covered = std::count_if(h.counts.begin(), h.counts.end(), [](long c) { return c > 0; });
    h.covered_fraction = static_cast<double>(covered) / bins;
    return h;
}

GapResult gap_test(const std::vector<double>& spectrum, double c_min, double merge_tol) {
    const std::vector<double> v = distinct_values(spectrum, merge_tol);
    GapResult r;
    r.gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < v.size(); ++i) r.gap = std::min(r.gap, v[i] - v[i - 1]);
    r.flag = r.gap >= c_min;
    return r;
}

UlfResult ulf_test(const std::vector<double>& spectrum, double length, int m, double merge_tol) {
    if (!(length > 0.0) || m < 1) throw PreconditionError("ULF test needs length > 0 and m >= 1");
    const std::vector<double> v = distinct_values(spectrum, merge_tol);
    UlfResult r;
    std::size_t j = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        j = std::max(j, i);
        while (j < v.size() && v[j] <= v[i] + length) ++j;
        const int count = static_cast<int>(j - i);
        if (count > r.worst_count) {
            r.worst_count = count;
            r.worst_start = v[i];
        }
    }
    r.flag = r.worst_count <= m;
    return r;
}

namespace {

double median(std::vector<double> x) {
    const std::size_t k = x.size() / 2;
    std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k), x.end());
    return x[k];
}

std::complex<double> phase_sum(const std::vector<double>& v, double a) {
    std::complex<double> s = 0.0;
    for (double x : v) s += std::polar(1.0, kTwoPi * x / a);
    return s;
}

}  // namespace

NetFit net_fit(const std::vector<double>& spectrum, double lower_fraction, double merge_tol) {
    NetFit fit;
    const std::vector<double> v = upper_part(distinct_values(spectrum, merge_tol), lower_fraction);
    fit.used_values = v.size();
    if (v.size() < 10) {
        fit.diagnostic = "fewer than 10 eigenvalues in the fitted range";
        return fit;
    }
    std::vector<double> gaps;
    for (std::size_t i = 1; i < v.size(); ++i) gaps.push_back(v[i] - v[i - 1]);
    const double h = median(gaps);
    if (!(h > 0.0)) {
        fit.diagnostic = "degenerate eigenvalue gaps";
        return fit;
    }

    // Dominant difference peak on [h/2, 4.5h] with bins of width h/20.
    const int bins = 80;
    const double lo = 0.5 * h, width = 0.05 * h;
    std::vector<long> counts(bins, 0);
    std::vector<double> sums(bins, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size() && v[j] - v[i] < lo + bins * width; ++j) {
            const double d = v[j] - v[i];
            if (d < lo) continue;
            const auto b = static_cast<std::size_t>((d - lo) / width);
            if (b >= counts.size()) continue;
            ++counts[b];
            sums[b] += d;
        }
    }
    const auto peak = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    if (counts[peak] == 0) {
        fit.diagnostic = "no difference histogram peak";
        return fit;
    }
    const double p = sums[peak] / static_cast<double>(counts[peak]);

    // Coherence scan around the peak.
    double a = p, best = -1.0;
    const int scan = 4000;
    for (int k = 0; k <= scan; ++k) {
        const double c = p * (0.9 + 0.2 * k / scan);
        const double r = std::abs(phase_sum(v, c));
        if (r > best) {
            best = r;
            a = c;
        }
    }
    double sigma = std::arg(phase_sum(v, a)) / kTwoPi;

    std::vector<long> n(v.size(), std::numeric_limits<long>::min());
    const int max_iterations = 100;
    for (fit.iterations = 1; fit.iterations <= max_iterations; ++fit.iterations) {
        bool changed = false;
        for (std::size_t j = 0; j < v.size(); ++j) {
            const long nj = std::lround(v[j] / a - sigma);
            if (nj != n[j]) changed = true;
            n[j] = nj;
        }
        if (!changed) break;
        // Least squares v = alpha + a n.
        double sn = 0, sv = 0, snn = 0, snv = 0;
        const double N = static_cast<double>(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) {
            const double x = static_cast<double>(n[j]);
            sn += x;
            sv += v[j];
            snn += x * x;
            snv += x * v[j];
        }
        const double det = N * snn - sn * sn;
        if (!(det > 0.0)) break;
        a = (N * snv - sn * sv) / det;
        const double alpha = (sv - a * sn) / N;
        sigma = alpha / a;
        if (!(a > 0.0)) {
            fit.diagnostic = "regression produced a non-positive spacing";
            return fit;
        }
    }
    const double shift = std::floor(sigma);
    sigma -= shift;
    double worst = 0.0, ss = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double r = v[j] - a * (sigma + static_cast<double>(n[j]) + shift);
        worst = std::max(worst, std::abs(r));
        ss += r * r;
    }
    fit.ok = true;
    fit.spacing = a;
    fit.period = kTwoPi / a;
    fit.sigma = sigma;
    fit.max_residual = worst;
    fit.rms_residual = std::sqrt(ss / static_cast<double>(v.size()));
    return fit;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::ZollConsistent: return "zoll-consistent";
        case Verdict::NotZollConsistent: return "not-zoll-consistent";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

ZollVerdict detect_zoll(const std::vector<double>& spectrum, const DetectorOptions& o) {
    ZollVerdict z;
    z.gap = gap_test(spectrum, o.gap_min, o.merge_tol);
    z.gap_min = o.gap_min;
    z.ulf = ulf_test(spectrum, o.ulf_length, o.ulf_count, o.merge_tol);
    z.ulf_length = o.ulf_length;
    z.ulf_count = o.ulf_count;
    z.histogram = sigma_histogram(spectrum, o.window, o.bins, o.lower_fraction, o.merge_tol);
    z.net = net_fit(spectrum, o.lower_fraction, o.merge_tol);
    z.net_threshold = z.net.ok ? o.net_tolerance * z.net.spacing : 0.0;
    z.net_flag = z.net.ok && z.net.max_residual <= z.net_threshold;
    if (z.histogram.covered_fraction >= o.covered_threshold) {
        z.verdict = Verdict::NotZollConsistent;
        z.rule = "difference histogram covers at least the threshold fraction of [0, W]";
    } else if (z.net_flag) {
        z.verdict = Verdict::ZollConsistent;
        z.rule = "eigenvalues fit an arithmetic net within tolerance";
    } else {
        z.verdict = Verdict::Inconclusive;
        z.rule = z.net.ok ? "net residual above tolerance with sparse differences" : "no net could be fitted";
    }
    return z;
}

std::vector<double> model_spectrum(std::string_view model, double bound) {
    if (!(bound >= 0.0)) throw PreconditionError("spectrum bound must be nonnegative");
    std::vector<double> out;
    if (model == "sphere") {
        const int L = static_cast<int>(std::floor(bound + 1e-12));
        for (int l = 0; l <= L; ++l) out.insert(out.end(), 2 * l + 1, std::sqrt(static_cast<double>(l) * (l + 1)));
    } else if (model == "torus") {
        const int K = static_cast<int>(std::floor(bound + 1e-12));
        for (int a = -K; a <= K; ++a) {
            for (int b = -K; b <= K; ++b) {
                const int n = a * a + b * b;
                if (n <= bound * bound + 1e-9) out.push_back(std::sqrt(static_cast<double>(n)));
            }
        }
        std::sort(out.begin(), out.end());
    } else {
        throw UnsupportedError("no closed-form spectrum for model '" + std::string(model) + "'");
    }
    return out;
}

}  // namespace zoll
