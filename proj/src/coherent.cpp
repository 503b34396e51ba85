#include "zoll/coherent.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>

#include "zoll/errors.hpp"
#include "zoll/quadrature.hpp"

namespace zoll {

namespace {

using cplx = std::complex<double>;

double smooth_step_down(double tau) {
    // 1 for tau <= 0, 0 for tau >= 1, C-infinity in between.
    if (tau <= 0.0) return 1.0;
    if (tau >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / (1.0 - tau));
    const double b = std::exp(-1.0 / tau);
    return a / (a + b);
}

Vec3 embed_lonlat(double lon, double lat) {
    return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

// Unit tangent of the chart covector xi = (xi_lon, xi_lat) at (lon, lat).
Vec3 tangent_lonlat(double lon, double lat, Vec2 xi) {
    const Vec3 e_lon(-std::sin(lon), std::cos(lon), 0.0);
    const Vec3 e_lat(-std::sin(lat) * std::cos(lon), -std::sin(lat) * std::sin(lon), std::cos(lat));
    const Vec3 v = (xi[0] / std::cos(lat)) * e_lon + xi[1] * e_lat;
    return v.normalized();
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// CoherentState

double CoherentState::inner_radius() const { return inner / std::sqrt(k); }
double CoherentState::outer_radius() const { return outer / std::sqrt(k); }

cplx CoherentState::gaussian(Vec2 x) const {
    const double d0 = x[0] - x0[0], d1 = x[1] - x0[1];
    const double amp = std::sqrt(k / kPi) * std::exp(-0.5 * k * (d0 * d0 + d1 * d1));
    return std::polar(amp, k * (d0 * xi0[0] + d1 * xi0[1]));
}

double CoherentState::cutoff(Vec2 x) const {
    const double sk = std::sqrt(k);
    double c = 1.0;
    for (int i = 0; i < 2; ++i) c *= smooth_step_down((std::abs(x[i] - x0[i]) * sk - inner) / (outer - inner));
    return c;
}

// ---------------------------------------------------------------------------------------------
// Pairing

cplx coherent_pairing(const CoherentState& state, const ChartSymbol& a, const PairingOptions& options) {
    if (!(state.k > 0.0)) throw PreconditionError("coherent state scale k must be positive");
    if (!(options.step > 0.0) || !(options.radius > 0.0)) throw PreconditionError("bad pairing grid");
    const double sk = std::sqrt(state.k);
    if (options.radius / sk > options.chart_radius) {
        throw NumericError("chart window too small for scale k: quadrature reaches " +
                           std::to_string(options.radius / sk));
    }
    const double h = options.step, R2 = options.radius * options.radius;
    const int J = static_cast<int>(std::floor(options.radius / h));
    cplx sum = 0.0;
    for (int i1 = -J; i1 <= J; ++i1) {
        const double X1 = h * i1;
        for (int i2 = -J; i2 <= J; ++i2) {
            const double X2 = h * i2;
            const double rx = X1 * X1 + X2 * X2;
            if (rx > R2) continue;
            const Vec2 x{state.x0[0] + X1 / sk, state.x0[1] + X2 / sk};
            for (int j1 = -J; j1 <= J; ++j1) {
                const double P1 = h * j1;
                for (int j2 = -J; j2 <= J; ++j2) {
                    const double P2 = h * j2;
                    const double r = rx + P1 * P1 + P2 * P2;
                    if (r > R2) continue;
                    const Vec2 xi{state.xi0[0] + P1 / sk, state.xi0[1] + P2 / sk};
                    sum += a(x, xi) * std::polar(std::exp(-0.5 * r), X1 * P1 + X2 * P2);
                }
            }
        }
    }
    const double h2 = h * h;
    return sum * (h2 * h2) / (2.0 * kPi * kPi);
}

PhasePoint sphere_phase_point(const SurfaceModel& sphere, const CoherentState& state) {
    const double lon = state.x0[0], lat = state.x0[1];
    return sphere.phase_from_embedded(embed_lonlat(lon, lat), tangent_lonlat(lon, lat, state.xi0));
}

// ---------------------------------------------------------------------------------------------
// Window grid and truncation

WindowGrid window_grid(const CoherentState& state) {
    if (std::abs(state.x0[1]) + state.outer_radius() >= 0.5 * kPi) {
        throw PreconditionError("coherent state window reaches a pole of the longitude-latitude chart");
    }
    const double R = state.outer_radius();
    const int nodes = 16;
    auto axis = [&](double center, double freq) {
        const int panels = std::max(8, static_cast<int>(std::ceil(std::abs(freq) * 2.0 * R / 8.0)));
        return quad::composite_gauss(std::vector<double>{center - R, center + R}, nodes, 2.0 * R / panels);
    };
    const quad::Rule rl = axis(state.x0[0], state.k * state.xi0[0]);
    const quad::Rule rt = axis(state.x0[1], state.k * state.xi0[1]);
    WindowGrid g;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < rl.nodes.size(); ++i) {
        for (std::size_t j = 0; j < rt.nodes.size(); ++j) {
            const Vec2 x{rl.nodes[i], rt.nodes[j]};
            const double w = rl.weights[i] * rt.weights[j] * std::cos(x[1]);
            const cplx u = state.gaussian(x) * state.cutoff(x);
            g.points.push_back(x);
            g.weights.push_back(w);
            g.values.push_back(u);
            norm2 += w * std::norm(u);
        }
    }
    g.norm_before = std::sqrt(norm2);
    for (cplx& u : g.values) u /= g.norm_before;
    return g;
}

double empirical_sobolev_constant(const SpectrumTable& table, int samples) {
    const SurfaceModel& model = table.model();
    const auto [lo, hi] = model.canonical_domain();
    Eigen::VectorXd sup = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table.basis_size()));
    for (int i = 0; i <= samples; ++i) {
        for (int j = 0; j < 2 * samples; ++j) {
            const Vec2 uv{lo[0] + (hi[0] - lo[0]) * i / samples, lo[1] + (hi[1] - lo[1]) * j / (2.0 * samples)};
            sup = sup.cwiseMax(table.evaluate(model.from_canonical(uv)).cwiseAbs());
        }
    }
    double C = 0.0;
    for (Eigen::Index j = 0; j < sup.size(); ++j) C = std::max(C, sup[j] / static_cast<double>(j + 1));
    return C;
}

TruncatedState truncate_high_frequency(const CoherentState& state, const SpectrumTable& table, int N, double epsilon) {
    if (table.model().kind() != SurfaceKind::Sphere) throw UnsupportedError("truncation is implemented on the sphere");
    if (N < 0 || static_cast<std::size_t>(N) > table.basis_size()) {
        throw PreconditionError("truncation index outside the table");
    }
    if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
    TruncatedState out;
    out.source = state;
    out.N = N;
    out.epsilon = epsilon;
    out.coefficients.assign(static_cast<std::size_t>(N), 0.0);
    if (N > 0) {
        const WindowGrid g = window_grid(state);
        const SurfaceModel& sphere = table.model();
        for (std::size_t p = 0; p < g.points.size(); ++p) {
            const Vec3 e = embed_lonlat(g.points[p][0], g.points[p][1]);
            const Eigen::VectorXd phi = table.evaluate(sphere.chart_point_from_embedded(e));
            const cplx wu = g.weights[p] * g.values[p];
            for (int j = 0; j < N; ++j) out.coefficients[static_cast<std::size_t>(j)] += wu * phi[j];
        }
    }
    double d2 = 0.0;
    for (const cplx& c : out.coefficients) d2 += std::norm(c);
    out.discarded = std::sqrt(d2);
    out.kept_norm_squared = 1.0 - d2;
    out.within_bound = out.discarded <= epsilon;
    out.sobolev_constant = empirical_sobolev_constant(table);
    const double r = 2.0 * std::sqrt(kPi) * out.sobolev_constant * N * N / epsilon;
    out.required_k = r * r;
    return out;
}

// ---------------------------------------------------------------------------------------------
// SphereBeam

struct SphereBeam::Impl {
    CoherentState state;
    int L = 0;
    int nphi = 0;
    std::vector<double> z, w;          // Gauss-Legendre nodes in z = sin(latitude)
    std::vector<double> lambda;        // sqrt(l(l+1))
    std::vector<double> qmm;           // sqrt((2m+1)/(2m))
    std::vector<std::size_t> offset;   // start of the (m, l = m..L) block in rec_a / rec_b
    std::vector<double> rec_a, rec_b;
    std::vector<cplx> c;               // coefficients, index l^2 + l + m
    double initial_norm2 = 0.0;
    Vec3 p0 = Vec3::Zero(), v0 = Vec3::Zero();

    fftw_complex* buf_in = nullptr;
    fftw_complex* buf_out = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    static std::size_t idx(int l, int m) { return static_cast<std::size_t>(l * l + l + m); }

    // Q_{l m}(z) for l = m..L into q (size L - m + 1); returns false when the block underflows.
    bool legendre_block(int m, double zz, double qm, std::vector<double>& q) const {
        q.assign(static_cast<std::size_t>(L - m + 1), 0.0);
        q[0] = qm;
        if (m < L) q[1] = std::sqrt(2.0 * m + 3.0) * zz * qm;
        const std::size_t o = offset[static_cast<std::size_t>(m)];
        for (int l = m + 2; l <= L; ++l) {
            const std::size_t r = o + static_cast<std::size_t>(l - m);
            q[static_cast<std::size_t>(l - m)] =
                rec_a[r] * (zz * q[static_cast<std::size_t>(l - m - 1)] - rec_b[r] * q[static_cast<std::size_t>(l - m - 2)]);
        }
        return true;
    }

    cplx value0(double lon, double lat) const {
        Vec2 x{state.x0[0] + wrap_difference(lon - state.x0[0]), lat};
        return state.gaussian(x) * state.cutoff(x);
    }

    Vec3 gamma(double t) const { return std::cos(t) * p0 + std::sin(t) * v0; }

    // Calls visit(i, row) with the synthesized values of the propagated state on ring i.
    template <class Visit>
    void synthesize(double t, Visit&& visit) const {
        std::vector<cplx> d(c.size());
        for (int l = 0; l <= L; ++l) {
            const cplx ph = std::polar(1.0, -lambda[static_cast<std::size_t>(l)] * t);
            for (int m = -l; m <= l; ++m) d[idx(l, m)] = c[idx(l, m)] * ph;
        }
        std::vector<double> q;
        std::vector<cplx> row(static_cast<std::size_t>(nphi));
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double zz = z[i];
            const double s = std::sqrt(std::max(0.0, 1.0 - zz * zz));
            std::fill(reinterpret_cast<double*>(buf_in), reinterpret_cast<double*>(buf_in) + 2 * nphi, 0.0);
            double qm = 1.0 / std::sqrt(4.0 * kPi);
            for (int m = 0; m <= L; ++m) {
                if (m > 0) qm *= qmm[static_cast<std::size_t>(m)] * s;
                if (std::abs(qm) < 1e-290) break;
                legendre_block(m, zz, qm, q);
                cplx vp = 0.0, vm = 0.0;
                for (int l = m; l <= L; ++l) {
                    const double ql = q[static_cast<std::size_t>(l - m)];
                    vp += d[idx(l, m)] * ql;
                    if (m > 0) vm += d[idx(l, -m)] * ql;
                }
                buf_in[m][0] = vp.real();
                buf_in[m][1] = vp.imag();
                if (m > 0) {
                    buf_in[nphi - m][0] = vm.real();
                    buf_in[nphi - m][1] = vm.imag();
                }
            }
            fftw_execute_dft(backward, buf_in, buf_out);
            for (int j = 0; j < nphi; ++j) row[static_cast<std::size_t>(j)] = {buf_out[j][0], buf_out[j][1]};
            visit(i, row);
        }
    }
};

SphereBeam::SphereBeam(const CoherentState& state, int degree) : impl_(std::make_unique<Impl>()) {
    Impl& I = *impl_;
    I.state = state;
    if (!(state.k > 0.0)) throw PreconditionError("coherent state scale k must be positive");
    I.L = degree > 0 ? degree : static_cast<int>(std::ceil(state.k + 8.0 * std::sqrt(state.k) + 10.0));
    I.nphi = 2 * I.L + 2;
    const quad::Rule gl = quad::gauss_legendre(I.L + 1, -1.0, 1.0);
    I.z = gl.nodes;
    I.w = gl.weights;
    I.lambda.resize(static_cast<std::size_t>(I.L + 1));
    for (int l = 0; l <= I.L; ++l) I.lambda[static_cast<std::size_t>(l)] = std::sqrt(static_cast<double>(l) * (l + 1));
    I.qmm.assign(static_cast<std::size_t>(I.L + 1), 0.0);
    for (int m = 1; m <= I.L; ++m) I.qmm[static_cast<std::size_t>(m)] = std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    for (int m = 0; m <= I.L; ++m) {
        I.offset.push_back(I.rec_a.size());
        for (int l = m; l <= I.L; ++l) {
            const double ll = l, mm = m;
            double a = 0.0, b = 0.0;
            if (l >= m + 2) {
                a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
                b = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
            }
            I.rec_a.push_back(a);
            I.rec_b.push_back(b);
        }
    }
    I.c.assign(static_cast<std::size_t>((I.L + 1) * (I.L + 1)), 0.0);

    I.buf_in = fftw_alloc_complex(static_cast<std::size_t>(I.nphi));
    I.buf_out = fftw_alloc_complex(static_cast<std::size_t>(I.nphi));
    I.forward = fftw_plan_dft_1d(I.nphi, I.buf_in, I.buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
    I.backward = fftw_plan_dft_1d(I.nphi, I.buf_in, I.buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);

    const double lat0 = state.x0[1], R = state.outer_radius();
    const double norm = window_grid(state).norm_before;
    const double dphi = kTwoPi / I.nphi;
    std::vector<double> q;
    for (std::size_t i = 0; i < I.z.size(); ++i) {
        const double lat = std::asin(I.z[i]);
        if (std::abs(lat - lat0) >= R) continue;
        for (int j = 0; j < I.nphi; ++j) {
            const cplx u = I.value0(dphi * j, lat) / norm;
            I.buf_in[j][0] = u.real();
            I.buf_in[j][1] = u.imag();
            I.initial_norm2 += I.w[i] * dphi * std::norm(u);
        }
        fftw_execute_dft(I.forward, I.buf_in, I.buf_out);
        const double s = std::sqrt(std::max(0.0, 1.0 - I.z[i] * I.z[i]));
        double qm = 1.0 / std::sqrt(4.0 * kPi);
        for (int m = 0; m <= I.L; ++m) {
            if (m > 0) qm *= I.qmm[static_cast<std::size_t>(m)] * s;
            if (std::abs(qm) < 1e-290) break;
            I.legendre_block(m, I.z[i], qm, q);
            const cplx Up = dphi * cplx(I.buf_out[m][0], I.buf_out[m][1]);
            const cplx Um = m > 0 ? dphi * cplx(I.buf_out[I.nphi - m][0], I.buf_out[I.nphi - m][1]) : 0.0;
            for (int l = m; l <= I.L; ++l) {
                const double wq = I.w[i] * q[static_cast<std::size_t>(l - m)];
                I.c[Impl::idx(l, m)] += wq * Up;
                if (m > 0) I.c[Impl::idx(l, -m)] += wq * Um;
            }
        }
    }
    I.p0 = embed_lonlat(state.x0[0], state.x0[1]);
    I.v0 = tangent_lonlat(state.x0[0], state.x0[1], state.xi0);
}

SphereBeam::~SphereBeam() {
    if (!impl_) return;
    fftw_destroy_plan(impl_->forward);
    fftw_destroy_plan(impl_->backward);
    fftw_free(impl_->buf_in);
    fftw_free(impl_->buf_out);
}

int SphereBeam::degree() const { return impl_->L; }
const CoherentState& SphereBeam::state() const { return impl_->state; }
double SphereBeam::initial_norm_squared() const { return impl_->initial_norm2; }

double SphereBeam::coefficient_norm_squared() const {
    double s = 0.0;
    for (const cplx& c : impl_->c) s += std::norm(c);
    return s;
}

void SphereBeam::remove_low_degrees(int lmin) {
    for (int l = 0; l < std::min(lmin, impl_->L + 1); ++l) {
        for (int m = -l; m <= l; ++m) impl_->c[Impl::idx(l, m)] = 0.0;
    }
}

SphereBeam::Snapshot SphereBeam::snapshot(double t, double tube_radius) const {
    const Impl& I = *impl_;
    Snapshot s;
    s.t = t;
    s.center = I.gamma(t);
    const double cos_r = std::cos(tube_radius);
    const double dphi = kTwoPi / I.nphi;
    Vec3 centroid = Vec3::Zero();
    I.synthesize(t, [&](std::size_t i, const std::vector<cplx>& row) {
        const double zz = I.z[i], sr = std::sqrt(std::max(0.0, 1.0 - zz * zz));
        for (int j = 0; j < I.nphi; ++j) {
            const double m = I.w[i] * dphi * std::norm(row[static_cast<std::size_t>(j)]);
            const Vec3 p(sr * std::cos(dphi * j), sr * std::sin(dphi * j), zz);
            s.total_mass += m;
            if (p.dot(s.center) > cos_r) s.tube_mass += m;
            centroid += m * p;
        }
    });
    const Vec3 cn = centroid.normalized();
    s.centroid_error = std::atan2(cn.cross(s.center).norm(), cn.dot(s.center));
    return s;
}

double SphereBeam::expectation(double t, const std::function<double(const Vec3&)>& f) const {
    const Impl& I = *impl_;
    const double dphi = kTwoPi / I.nphi;
    double sum = 0.0;
    I.synthesize(t, [&](std::size_t i, const std::vector<cplx>& row) {
        const double zz = I.z[i], sr = std::sqrt(std::max(0.0, 1.0 - zz * zz));
        for (int j = 0; j < I.nphi; ++j) {
            const double m = I.w[i] * dphi * std::norm(row[static_cast<std::size_t>(j)]);
            if (m != 0.0) sum += m * f(Vec3(sr * std::cos(dphi * j), sr * std::sin(dphi * j), zz));
        }
    });
    return sum;
}

}  // namespace zoll
