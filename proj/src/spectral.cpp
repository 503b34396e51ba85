#include "zoll/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

#include "zoll/errors.hpp"

namespace zoll {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

std::string sphere_label(int l, int m) { return "Y(" + std::to_string(l) + "," + std::to_string(m) + ")"; }

std::string torus_label(int k1, int k2, bool sine, bool constant) {
    if (constant) return "1";
    return std::string(sine ? "sin(" : "cos(") + std::to_string(k1) + "," + std::to_string(k2) + ")";
}

// Basis values at canonical coordinates, written into out (size basis_size).
class Evaluator {
public:
    explicit Evaluator(const SpectrumTable& t) : table_(t), L_(t.max_frequency()) {
        if (t.model().kind() == SurfaceKind::Sphere) {
            Q_.resize(static_cast<std::size_t>((L_ + 1) * (L_ + 2) / 2));
        } else {
            e1_.resize(L_ + 1);
            e2_.resize(2 * L_ + 1);
        }
        trig_.resize(L_ + 1);
    }

    void operator()(Vec2 uv, double* out) {
        if (table_.model().kind() == SurfaceKind::Sphere) {
            sphere(uv[0], uv[1], out);
        } else {
            torus(uv[0], uv[1], out);
        }
    }

private:
    void sphere(double z, double phi, double* out) {
        z = std::clamp(z, -1.0, 1.0);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        normalized_legendre(L_, z, s, Q_);
        powers(phi, trig_);
        std::size_t k = 0;
        for (const Eigenspace& e : table_.spaces()) {
            for (const BasisFunction& b : e.basis) {
                const int am = std::abs(b.m);
                const double q = Q_[static_cast<std::size_t>(b.l * (b.l + 1) / 2 + am)];
                if (b.m == 0) {
                    out[k++] = q;
                } else if (b.m < 0) {
                    out[k++] = kSqrt2 * q * trig_[am].imag();
                } else {
                    out[k++] = kSqrt2 * q * trig_[am].real();
                }
            }
        }
    }

    void torus(double x1, double x2, double* out) {
        powers(x1, e1_);
        std::vector<std::complex<double>> pos(L_ + 1);
        powers(x2, pos);
        for (int j = 0; j <= L_; ++j) {
            e2_[L_ + j] = pos[j];
            e2_[L_ - j] = std::conj(pos[j]);
        }
        const double c0 = 1.0 / kTwoPi;
        const double c1 = 1.0 / (kPi * kSqrt2);
        std::size_t k = 0;
        for (const Eigenspace& e : table_.spaces()) {
            for (const BasisFunction& b : e.basis) {
                if (b.k1 == 0 && b.k2 == 0) {
                    out[k++] = c0;
                    continue;
                }
                const std::complex<double> w = e1_[b.k1] * e2_[L_ + b.k2];
                out[k++] = c1 * (b.sine ? w.imag() : w.real());
            }
        }
    }

    static void powers(double angle, std::vector<std::complex<double>>& p) {
        if (p.empty()) return;
        p[0] = 1.0;
        const std::complex<double> step = std::polar(1.0, angle);
        // Recompute exactly every few steps to keep rounding from accumulating.
        for (std::size_t j = 1; j < p.size(); ++j) {
            p[j] = (j % 16 == 0) ? std::polar(1.0, static_cast<double>(j) * angle) : p[j - 1] * step;
        }
    }

    const SpectrumTable& table_;
    int L_;
    std::vector<double> Q_;
    std::vector<std::complex<double>> trig_, e1_, e2_;
};

struct WeightedNodes {
    std::vector<Vec2> uv;
    std::vector<double> w;
};

WeightedNodes weighted_nodes(const SurfaceModel& model, const BaseWeight& weight, const BaseQuadratureSpec& spec) {
    WeightedNodes out;
    for (const BaseNode& n : base_quadrature(model, weight.hints, spec)) {
        const double w = n.weight * weight.f(n.x);
        if (w == 0.0) continue;
        out.uv.push_back(n.uv);
        out.w.push_back(w);
    }
    return out;
}

constexpr std::size_t kChunk = 1024;

// Calls sink(Phi, w) for consecutive chunks of weighted nodes; Phi is chunk x basis_size.
template <class Sink>
void for_chunks(const SpectrumTable& table, const WeightedNodes& nodes, Sink&& sink) {
    Evaluator eval(table);
    const std::size_t N = table.basis_size();
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> phi;
    Eigen::VectorXd w;
    for (std::size_t start = 0; start < nodes.w.size(); start += kChunk) {
        const std::size_t c = std::min(kChunk, nodes.w.size() - start);
        phi.resize(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(N));
        w.resize(static_cast<Eigen::Index>(c));
        for (std::size_t r = 0; r < c; ++r) {
            eval(nodes.uv[start + r], phi.row(static_cast<Eigen::Index>(r)).data());
            w[static_cast<Eigen::Index>(r)] = nodes.w[start + r];
        }
        sink(phi, w);
    }
}

}  // namespace

std::vector<Eigen::MatrixXd> eigenspace_grams(const SpectrumTable& table, const BaseWeight& weight,
                                              const BaseQuadratureSpec& spec) {
    std::vector<Eigen::MatrixXd> blocks;
    for (const Eigenspace& e : table.spaces()) blocks.push_back(Eigen::MatrixXd::Zero(e.multiplicity(), e.multiplicity()));
    for_chunks(table, weighted_nodes(table.model(), weight, spec), [&](const auto& phi, const Eigen::VectorXd& w) {
        for (std::size_t s = 0; s < blocks.size(); ++s) {
            const Eigenspace& e = table.spaces()[s];
            const auto cols = phi.middleCols(static_cast<Eigen::Index>(e.offset), e.multiplicity());
            blocks[s].noalias() += cols.transpose() * w.asDiagonal() * cols;
        }
    });
    return blocks;
}

namespace {

MassMatrix make_mass(const SpectrumTable& table, std::size_t s, const BaseWeight& weight, Eigen::MatrixXd coarse,
                     const Eigen::MatrixXd& fine, double warn_tol) {
    MassMatrix m;
    m.lambda = table.spaces()[s].lambda;
    m.weight_label = weight.label;
    m.error_estimate = (fine - coarse).cwiseAbs().maxCoeff();
    m.accuracy_warning = m.error_estimate > warn_tol;
    m.matrix = 0.5 * (fine + fine.transpose());
    return m;
}

}  // namespace

SpectrumTable::SpectrumTable(SurfaceModel model, double lambda_max, std::vector<Eigenspace> spaces)
    : model_(std::move(model)), lambda_max_(lambda_max), spaces_(std::move(spaces)) {
    for (Eigenspace& e : spaces_) {
        e.offset = basis_size_;
        basis_size_ += e.basis.size();
    }
}

std::vector<double> SpectrumTable::eigenvalues() const {
    std::vector<double> out;
    for (const Eigenspace& e : spaces_) out.push_back(e.lambda);
    return out;
}

std::vector<int> SpectrumTable::multiplicities() const {
    std::vector<int> out;
    for (const Eigenspace& e : spaces_) out.push_back(e.multiplicity());
    return out;
}

std::vector<double> SpectrumTable::eigenvalue_per_basis() const {
    std::vector<double> out;
    out.reserve(basis_size_);
    for (const Eigenspace& e : spaces_) out.insert(out.end(), e.basis.size(), e.lambda);
    return out;
}

std::size_t SpectrumTable::index_of(double lambda, double tol) const {
    for (std::size_t i = 0; i < spaces_.size(); ++i) {
        if (std::abs(spaces_[i].lambda - lambda) <= tol) return i;
    }
    throw PreconditionError("no eigenvalue " + std::to_string(lambda) + " in the table");
}

Eigen::VectorXd SpectrumTable::evaluate(const ChartPoint& x) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(basis_size_));
    Evaluator eval(*this);
    eval(model_.canonical(x), out.data());
    return out;
}

double SpectrumTable::evaluate(std::size_t global_index, const ChartPoint& x) const {
    if (global_index >= basis_size_) throw PreconditionError("basis index out of range");
    return evaluate(x)[static_cast<Eigen::Index>(global_index)];
}

int SpectrumTable::max_frequency() const {
    int L = 0;
    for (const Eigenspace& e : spaces_) {
        for (const BasisFunction& b : e.basis) L = std::max({L, b.l, std::abs(b.k1), std::abs(b.k2)});
    }
    return L;
}

void normalized_legendre(int L, double z, double s, std::vector<double>& Q) {
    Q.assign(static_cast<std::size_t>((L + 1) * (L + 2) / 2), 0.0);
    auto at = [&](int l, int m) -> double& { return Q[static_cast<std::size_t>(l * (l + 1) / 2 + m)]; };
    at(0, 0) = 1.0 / std::sqrt(4.0 * kPi);
    for (int m = 1; m <= L; ++m) at(m, m) = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * at(m - 1, m - 1);
    for (int m = 0; m < L; ++m) at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * z * at(m, m);
    for (int m = 0; m <= L; ++m) {
        for (int l = m + 2; l <= L; ++l) {
            const double ll = l, mm = m;
            const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
            const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
            at(l, m) = a * (z * at(l - 1, m) - b * at(l - 2, m));
        }
    }
}

SpectrumTable eigenbasis(const SurfaceModel& model, double lambda_max) {
    if (!(lambda_max >= 0.0)) throw PreconditionError("lambda_max must be nonnegative");
    std::vector<Eigenspace> spaces;
    if (model.kind() == SurfaceKind::Sphere) {
        const int L = static_cast<int>(std::floor(lambda_max + 1e-12));
        for (int l = 0; l <= L; ++l) {
            Eigenspace e;
            e.lambda = std::sqrt(static_cast<double>(l) * (l + 1));
            for (int m = -l; m <= l; ++m) e.basis.push_back({l, m, 0, 0, m < 0, sphere_label(l, m)});
            spaces.push_back(std::move(e));
        }
    } else if (model.kind() == SurfaceKind::Torus) {
        const int K = static_cast<int>(std::floor(lambda_max + 1e-12));
        const double bound = lambda_max * lambda_max + 1e-9;
        std::map<int, Eigenspace> by_norm;
        by_norm[0].basis.push_back({0, 0, 0, 0, false, torus_label(0, 0, false, true)});
        for (int k1 = 0; k1 <= K; ++k1) {
            for (int k2 = -K; k2 <= K; ++k2) {
                if (k1 == 0 && k2 <= 0) continue;
                const int n2 = k1 * k1 + k2 * k2;
                if (n2 > bound) continue;
                Eigenspace& e = by_norm[n2];
                e.basis.push_back({0, 0, k1, k2, false, torus_label(k1, k2, false, false)});
                e.basis.push_back({0, 0, k1, k2, true, torus_label(k1, k2, true, false)});
            }
        }
        for (auto& [n2, e] : by_norm) {
            e.lambda = std::sqrt(static_cast<double>(n2));
            spaces.push_back(std::move(e));
        }
    } else {
        throw UnsupportedError("closed-form eigenbasis is available for the sphere and the flat torus only");
    }
    return SpectrumTable(model, lambda_max, std::move(spaces));
}

BaseQuadratureSpec spectral_quadrature(const SpectrumTable& table) {
    // Products of basis functions carry frequencies up to 2L. An n-point Gauss panel resolves
    // about 0.9 n radians of phase to double precision, and n >= L + 2 makes z-polynomials exact.
    const int L = table.max_frequency();
    BaseQuadratureSpec spec;
    spec.nodes = std::max(16, L + 2);
    const double omega = 2.0 * L;
    const int phase_panels = static_cast<int>(std::ceil(kTwoPi * omega / (0.9 * spec.nodes)));
    spec.panels_v = std::max(8, phase_panels);
    spec.panels_u = table.model().kind() == SurfaceKind::Torus ? spec.panels_v : 4;
    return spec;
}

Eigen::MatrixXd weighted_gram(const SpectrumTable& table, const BaseWeight& weight, const BaseQuadratureSpec& spec) {
    const auto N = static_cast<Eigen::Index>(table.basis_size());
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(N, N);
    for_chunks(table, weighted_nodes(table.model(), weight, spec), [&](const auto& phi, const Eigen::VectorXd& w) {
        G.noalias() += phi.transpose() * w.asDiagonal() * phi;
    });
    return 0.5 * (G + G.transpose());
}

Eigen::MatrixXd weighted_gram(const SpectrumTable& table, const BaseWeight& weight) {
    return weighted_gram(table, weight, spectral_quadrature(table));
}

std::vector<MassMatrix> mass_matrices(const SpectrumTable& table, const BaseWeight& weight, double warn_tol) {
    const BaseQuadratureSpec spec = spectral_quadrature(table);
    std::vector<Eigen::MatrixXd> coarse = eigenspace_grams(table, weight, spec);
    std::vector<Eigen::MatrixXd> fine = eigenspace_grams(table, weight, spec.refined());
    std::vector<MassMatrix> out;
    for (std::size_t s = 0; s < coarse.size(); ++s) {
        out.push_back(make_mass(table, s, weight, std::move(coarse[s]), fine[s], warn_tol));
    }
    return out;
}

MassMatrix mass_matrix(const SpectrumTable& table, double lambda, const BaseWeight& weight, double warn_tol) {
    const std::size_t s = table.index_of(lambda);
    SpectrumTable single(table.model(), table.lambda_max(), {table.spaces()[s]});
    std::vector<MassMatrix> m = mass_matrices(single, weight, warn_tol);
    m.front().lambda = table.spaces()[s].lambda;
    return m.front();
}

double cross_matrix_element(const SpectrumTable& table, double lambda, double mu, int i, int j,
                            const BaseWeight& weight) {
    const Eigenspace& a = table.spaces()[table.index_of(lambda)];
    const Eigenspace& b = table.spaces()[table.index_of(mu)];
    if (i < 0 || i >= a.multiplicity() || j < 0 || j >= b.multiplicity()) {
        throw PreconditionError("eigenspace index out of range");
    }
    SpectrumTable pair(table.model(), table.lambda_max(), {Eigenspace{a.lambda, {a.basis[i]}, 0},
                                                           Eigenspace{b.lambda, {b.basis[j]}, 0}});
    // Size the rule for the full table so the pair sees the same resolution.
    BaseQuadratureSpec spec = spectral_quadrature(table);
    double sum = 0.0;
    for_chunks(pair, weighted_nodes(table.model(), weight, spec), [&](const auto& phi, const Eigen::VectorXd& w) {
        sum += (phi.col(0).cwiseProduct(phi.col(1))).dot(w);
    });
    return sum;
}

std::size_t counting_function(const SpectrumTable& table, double lambda) {
    std::size_t n = 0;
    for (const Eigenspace& e : table.spaces()) {
        if (e.lambda <= lambda + 1e-12) n += e.basis.size();
    }
    return n;
}

}  // namespace zoll
