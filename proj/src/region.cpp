#include "zoll/region.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

#include "zoll/errors.hpp"

namespace zoll {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

double angle_between(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

bool accepts(double sd, bool closed) { return closed ? sd <= 0.0 : sd < 0.0; }

}  // namespace

// ---------------------------------------------------------------------------------------------
// Curves

double Curve::distance(const ChartPoint& x) const {
    if (model.kind() == SurfaceKind::Sphere) {
        const auto [p, v] = model.embed_phase(start);
        const Vec3 n = p.cross(v).normalized();
        const Vec3 q = model.embed(x);
        const double off = std::asin(std::clamp(std::abs(q.dot(n)), 0.0, 1.0));
        if (length >= kTwoPi) return off;
        const Vec3 qp = q - q.dot(n) * n;
        if (qp.norm() < 1e-15) return 0.5 * kPi;
        const double along = wrap_angle(std::atan2(qp.dot(v), qp.dot(p)));
        if (along <= length) return off;
        const Vec3 end = p * std::cos(length) + v * std::sin(length);
        return std::min(angle_between(q, p), angle_between(q, end));
    }
    if (model.kind() == SurfaceKind::Torus) {
        const double dx = start.xi[0], dy = start.xi[1];
        const int pieces = std::max(1, static_cast<int>(std::ceil(length / (0.5 * kPi))));
        const double ell = length / pieces;
        double best = kInf;  // squared
        for (int k = 0; k < pieces; ++k) {
            const double mx = start.x[0] + dx * (k + 0.5) * ell;
            const double my = start.x[1] + dy * (k + 0.5) * ell;
            const double ox = wrap_difference(x.x[0] - mx);
            const double oy = wrap_difference(x.x[1] - my);
            for (int sx = -1; sx <= 1; ++sx) {
                for (int sy = -1; sy <= 1; ++sy) {
                    const double wx = ox + kTwoPi * sx, wy = oy + kTwoPi * sy;
                    const double tau = std::clamp(wx * dx + wy * dy, -0.5 * ell, 0.5 * ell);
                    const double ex = wx - tau * dx, ey = wy - tau * dy;
                    best = std::min(best, ex * ex + ey * ey);
                }
            }
        }
        return std::sqrt(best);
    }
    throw UnsupportedError("curves are only available on the sphere and the torus");
}

Curve great_circle_arc(const SurfaceModel& sphere, const PhasePoint& start, double length,
                       std::string label) {
    if (sphere.kind() != SurfaceKind::Sphere) throw UnsupportedError("great_circle_arc needs the sphere");
    return Curve{sphere, start, std::min(length, kTwoPi), std::move(label)};
}

Curve torus_segment(const SurfaceModel& torus, Vec2 start, double angle, double length,
                    std::string label) {
    if (torus.kind() != SurfaceKind::Torus) throw UnsupportedError("torus_segment needs the torus");
    return Curve{torus, PhasePoint{0, start, {std::cos(angle), std::sin(angle)}}, length, std::move(label)};
}

// ---------------------------------------------------------------------------------------------
// Region nodes

struct Region::Node {
    virtual ~Node() = default;
    virtual bool contains(const SurfaceModel& m, const ChartPoint& x) const = 0;
    virtual double sdist(const SurfaceModel& m, const ChartPoint& x) const = 0;
    virtual void breaks(const SurfaceModel&, int, double, std::vector<double>&) const {}
    Topology topology = Topology::Other;
    std::string descriptor;
};

namespace {

using Node = Region::Node;
using Topology = Region::Topology;

void lat_break(double lat, std::vector<double>& out) {
    if (lat > -0.5 * kPi && lat < 0.5 * kPi) out.push_back(std::sin(lat));
}

struct CapNode : Node {
    double boundary;
    bool upper;
    bool closed;
    bool contains(const SurfaceModel& m, const ChartPoint& x) const override {
        return accepts(sdist(m, x), closed);
    }
    double sdist(const SurfaceModel& m, const ChartPoint& x) const override {
        const double lat = m.latitude(x);
        return upper ? boundary - lat : lat - boundary;
    }
    void breaks(const SurfaceModel&, int axis, double level, std::vector<double>& out) const override {
        if (axis == 0) lat_break(upper ? boundary - level : boundary + level, out);
    }
};

struct BandNode : Node {
    double half_width;
    bool closed;
    bool contains(const SurfaceModel& m, const ChartPoint& x) const override {
        return accepts(sdist(m, x), closed);
    }
    double sdist(const SurfaceModel& m, const ChartPoint& x) const override {
        return std::abs(m.latitude(x)) - half_width;
    }
    void breaks(const SurfaceModel&, int axis, double level, std::vector<double>& out) const override {
        if (axis != 0) return;
        const double lat = half_width + level;
        if (lat >= 0.0) {
            lat_break(lat, out);
            lat_break(-lat, out);
        }
    }
};

struct StripNode : Node {
    double center;
    double half_width;
    int axis;
    bool closed;
    bool contains(const SurfaceModel& m, const ChartPoint& x) const override {
        return accepts(sdist(m, x), closed);
    }
    double sdist(const SurfaceModel&, const ChartPoint& x) const override {
        return std::abs(wrap_difference(x.x[axis] - center)) - half_width;
    }
    void breaks(const SurfaceModel&, int ax, double level, std::vector<double>& out) const override {
        if (ax != axis) return;
        const double w = half_width + level;
        if (w < 0.0) return;
        out.push_back(wrap_angle(center - w));
        out.push_back(wrap_angle(center + w));
    }
};

struct TubeNode : Node {
    Curve curve;
    double radius;
    bool closed;
    explicit TubeNode(Curve c) : curve(std::move(c)) {}
    bool contains(const SurfaceModel& m, const ChartPoint& x) const override {
        return accepts(sdist(m, x), closed);
    }
    double sdist(const SurfaceModel&, const ChartPoint& x) const override {
        return curve.distance(x) - radius;
    }
    void breaks(const SurfaceModel& m, int axis, double level, std::vector<double>& out) const override {
        const double w = radius + level;
        if (w < 0.0) return;
        if (m.kind() == SurfaceKind::Sphere && curve.length >= kTwoPi && axis == 0) {
            // Full great circle: only the equator aligns with the canonical latitude axis.
            const auto [p, v] = m.embed_phase(curve.start);
            const Vec3 n = p.cross(v).normalized();
            if (std::abs(std::abs(n.z()) - 1.0) < 1e-14) {
                lat_break(w, out);
                lat_break(-w, out);
            }
        }
        if (m.kind() == SurfaceKind::Torus && curve.length >= kTwoPi - 1e-12) {
            const double dx = curve.start.xi[0], dy = curve.start.xi[1];
            // Horizontal line x2 = c breaks the x2 axis; vertical line x1 = c breaks the x1 axis.
            if (std::abs(dy) < 1e-14 && axis == 1) {
                out.push_back(wrap_angle(curve.start.x[1] - w));
                out.push_back(wrap_angle(curve.start.x[1] + w));
            }
            if (std::abs(dx) < 1e-14 && axis == 0) {
                out.push_back(wrap_angle(curve.start.x[0] - w));
                out.push_back(wrap_angle(curve.start.x[0] + w));
            }
        }
    }
};

struct ConstNode : Node {
    bool value;
    bool contains(const SurfaceModel&, const ChartPoint&) const override { return value; }
    double sdist(const SurfaceModel&, const ChartPoint&) const override { return value ? -kInf : kInf; }
};

struct ComplementNode : Node {
    std::shared_ptr<const Node> child;
    bool contains(const SurfaceModel& m, const ChartPoint& x) const override { return !child->contains(m, x); }
    double sdist(const SurfaceModel& m, const ChartPoint& x) const override { return -child->sdist(m, x); }
    void breaks(const SurfaceModel& m, int axis, double level, std::vector<double>& out) const override {
        child->breaks(m, axis, -level, out);
    }
};

struct CombineNode : Node {
    std::vector<std::shared_ptr<const Node>> children;
    bool is_union;
    bool contains(const SurfaceModel& m, const ChartPoint& x) const override {
        for (const auto& c : children) {
            if (c->contains(m, x) == is_union) return is_union;
        }
        return !is_union;
    }
    double sdist(const SurfaceModel& m, const ChartPoint& x) const override {
        double best = is_union ? kInf : -kInf;
        for (const auto& c : children) {
            const double d = c->sdist(m, x);
            best = is_union ? std::min(best, d) : std::max(best, d);
        }
        return best;
    }
    void breaks(const SurfaceModel& m, int axis, double level, std::vector<double>& out) const override {
        for (const auto& c : children) c->breaks(m, axis, level, out);
    }
};

Topology combine_topology(const std::vector<Topology>& tags) {
    bool all_open = true, all_closed = true, all_clopen = true;
    for (Topology t : tags) {
        all_open = all_open && (t == Topology::Open || t == Topology::Clopen);
        all_closed = all_closed && (t == Topology::Closed || t == Topology::Clopen);
        all_clopen = all_clopen && t == Topology::Clopen;
    }
    if (all_clopen) return Topology::Clopen;
    if (all_open) return Topology::Open;
    if (all_closed) return Topology::Closed;
    return Topology::Other;
}

void require_kind(const SurfaceModel& m, SurfaceKind k, const char* what) {
    if (m.kind() != k) {
        throw UnsupportedError(std::string(what) + " requires the " + std::string(to_string(k)) + " model");
    }
}

}  // namespace

std::string_view to_string(Region::Topology t) {
    switch (t) {
        case Region::Topology::Open: return "open";
        case Region::Topology::Closed: return "closed";
        case Region::Topology::Clopen: return "clopen";
        case Region::Topology::Other: return "other";
    }
    return "other";
}

bool Region::contains(const ChartPoint& x) const { return node_->contains(model_, x); }
double Region::sdist(const ChartPoint& x) const { return node_->sdist(model_, x); }
Region::Topology Region::topology() const { return node_->topology; }
const std::string& Region::descriptor() const { return node_->descriptor; }

std::vector<double> Region::level_breaks(int axis, double level) const {
    std::vector<double> out;
    node_->breaks(model_, axis, level, out);
    return out;
}

BaseHints Region::hints() const {
    BaseHints h;
    h.u_breaks = level_breaks(0, 0.0);
    h.v_breaks = level_breaks(1, 0.0);
    const Region self = *this;
    h.piece = [self](const ChartPoint& x) { return self.contains(x) ? 1 : 0; };
    return h;
}

Region Region::complement() const {
    auto n = std::make_shared<ComplementNode>();
    n->child = node_;
    switch (node_->topology) {
        case Topology::Open: n->topology = Topology::Closed; break;
        case Topology::Closed: n->topology = Topology::Open; break;
        default: n->topology = node_->topology; break;
    }
    n->descriptor = "complement(" + node_->descriptor + ")";
    return Region(model_, std::move(n));
}

Region Region::full(const SurfaceModel& model) {
    auto n = std::make_shared<ConstNode>();
    n->value = true;
    n->topology = Topology::Clopen;
    n->descriptor = "full";
    return Region(model, std::move(n));
}

Region Region::empty(const SurfaceModel& model) {
    auto n = std::make_shared<ConstNode>();
    n->value = false;
    n->topology = Topology::Clopen;
    n->descriptor = "empty";
    return Region(model, std::move(n));
}

Region Region::union_of(const std::vector<Region>& parts) {
    if (parts.empty()) throw PreconditionError("union of zero regions");
    auto n = std::make_shared<CombineNode>();
    n->is_union = true;
    std::vector<Topology> tags;
    n->descriptor = "union(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        tags.push_back(parts[i].topology());
        n->descriptor += (i ? "," : "") + parts[i].descriptor();
        n->children.push_back(parts[i].node_);
    }
    n->descriptor += ")";
    n->topology = combine_topology(tags);
    return Region(parts[0].model_, std::move(n));
}

Region Region::intersection_of(const std::vector<Region>& parts) {
    if (parts.empty()) throw PreconditionError("intersection of zero regions");
    auto n = std::make_shared<CombineNode>();
    n->is_union = false;
    std::vector<Topology> tags;
    n->descriptor = "intersection(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        tags.push_back(parts[i].topology());
        n->descriptor += (i ? "," : "") + parts[i].descriptor();
        n->children.push_back(parts[i].node_);
    }
    n->descriptor += ")";
    n->topology = combine_topology(tags);
    return Region(parts[0].model_, std::move(n));
}

Region Region::cap(const SurfaceModel& sphere, double boundary_lat, bool upper, bool closed) {
    require_kind(sphere, SurfaceKind::Sphere, "cap");
    auto n = std::make_shared<CapNode>();
    n->boundary = boundary_lat;
    n->upper = upper;
    n->closed = closed;
    n->topology = closed ? Topology::Closed : Topology::Open;
    n->descriptor = std::string("cap(lat") + (upper ? (closed ? ">=" : ">") : (closed ? "<=" : "<")) +
                    num(boundary_lat) + ")";
    return Region(sphere, std::move(n));
}

Region Region::band(const SurfaceModel& sphere, double half_width, bool closed) {
    require_kind(sphere, SurfaceKind::Sphere, "band");
    auto n = std::make_shared<BandNode>();
    n->half_width = half_width;
    n->closed = closed;
    n->topology = closed ? Topology::Closed : Topology::Open;
    n->descriptor = std::string("band(|lat|") + (closed ? "<=" : "<") + num(half_width) + ")";
    return Region(sphere, std::move(n));
}

Region Region::strip(const SurfaceModel& torus, double lo, double hi, int axis, bool closed) {
    require_kind(torus, SurfaceKind::Torus, "strip");
    if (!(hi > lo) || hi - lo >= kTwoPi) throw PreconditionError("strip needs lo < hi < lo + 2pi");
    if (axis != 0 && axis != 1) throw PreconditionError("strip axis must be 0 or 1");
    auto n = std::make_shared<StripNode>();
    n->center = 0.5 * (lo + hi);
    n->half_width = 0.5 * (hi - lo);
    n->axis = axis;
    n->closed = closed;
    n->topology = closed ? Topology::Closed : Topology::Open;
    n->descriptor = std::string("strip") + (closed ? "[" : "(") + num(lo) + "," + num(hi) +
                    (axis == 1 ? ",x2" : "") + (closed ? "]" : ")");
    return Region(torus, std::move(n));
}

Region Region::tube(const Curve& curve, double radius, bool closed) {
    if (!(radius > 0.0)) throw PreconditionError("tube radius must be positive");
    auto n = std::make_shared<TubeNode>(curve);
    n->radius = radius;
    n->closed = closed;
    n->topology = closed ? Topology::Closed : Topology::Open;
    n->descriptor = std::string(closed ? "ctube(" : "tube(") + (curve.label.empty() ? "curve" : curve.label) +
                    "," + num(radius) + ")";
    return Region(curve.model, std::move(n));
}

Region eps_neighborhood(const Region& region, double eps) {
    if (!(eps > 0.0)) throw PreconditionError("eps_neighborhood needs eps > 0");
    struct EpsNode : Node {
        Region base;
        double eps = 0.0;
        explicit EpsNode(Region r) : base(std::move(r)) {}
        bool contains(const SurfaceModel&, const ChartPoint& x) const override { return base.sdist(x) < eps; }
        double sdist(const SurfaceModel&, const ChartPoint& x) const override { return base.sdist(x) - eps; }
        void breaks(const SurfaceModel&, int axis, double level, std::vector<double>& out) const override {
            auto b = base.level_breaks(axis, level + eps);
            out.insert(out.end(), b.begin(), b.end());
        }
    };
    auto n = std::make_shared<EpsNode>(region);
    n->eps = eps;
    n->topology = Topology::Open;
    n->descriptor = "eps(" + region.descriptor() + "," + num(eps) + ")";
    return Region::from_node(region.model(), std::move(n));
}

Region eps_neighborhood(const Curve& curve, double eps) { return Region::tube(curve, eps, false); }

// ---------------------------------------------------------------------------------------------
// Descriptor parsing

namespace {

class Parser {
public:
    Parser(const SurfaceModel& model, std::string_view text) : model_(model), text_(text) {}

    Region region_only() {
        Region r = region();
        expect_end();
        return r;
    }

    Curve curve_only() {
        Curve c = curve();
        expect_end();
        return c;
    }

    double number_only() {
        const double v = expr();
        expect_end();
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'",
                         "region");
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(std::string_view s) {
        skip();
        return text_.substr(pos_, s.size()) == s;
    }

    bool accept(std::string_view s) {
        if (!peek(s)) return false;
        pos_ += s.size();
        return true;
    }

    void expect(std::string_view s) {
        if (!accept(s)) fail("expected '" + std::string(s) + "'");
    }

    void expect_end() {
        skip();
        if (pos_ != text_.size()) fail("trailing input");
    }

    std::string ident() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        if (start == pos_) fail("expected a name");
        return std::string(text_.substr(start, pos_ - start));
    }

    // expr := term (('+'|'-') term)* ; term := factor (('*'|'/') factor)* ; factor := ['-'] atom
    double expr() {
        double v = term();
        for (;;) {
            if (accept("+")) v += term();
            else if (accept("-")) v -= term();
            else return v;
        }
    }

    double term() {
        double v = factor();
        for (;;) {
            if (accept("*")) v *= factor();
            else if (accept("/")) {
                const double d = factor();
                if (d == 0.0) fail("division by zero");
                v /= d;
            } else {
                return v;
            }
        }
    }

    double factor() {
        if (accept("-")) return -factor();
        if (accept("+")) return factor();
        if (accept("(")) {
            const double v = expr();
            expect(")");
            return v;
        }
        skip();
        if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
            const std::size_t save = pos_;
            if (ident() == "pi") return kPi;
            pos_ = save;
            fail("unknown constant");
        }
        const std::string rest(text_.substr(pos_));
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(rest, &used);
        } catch (const std::exception&) {
            fail("expected a number");
        }
        pos_ += used;
        return v;
    }

    void need(SurfaceKind k, const std::string& what) {
        if (model_.kind() != k) fail(what + " needs the " + std::string(to_string(k)) + " model");
    }

    Region region() {
        const std::size_t start = pos_;
        const std::string name = ident();
        if (name == "full") {
            if (accept("(")) expect(")");
            return Region::full(model_);
        }
        if (name == "empty") {
            if (accept("(")) expect(")");
            return Region::empty(model_);
        }
        if (name == "cap") {
            need(SurfaceKind::Sphere, "cap");
            expect("(");
            if (ident() != "lat") fail("cap expects 'lat'");
            bool upper = true, closed = true;
            if (accept(">=")) {
            } else if (accept(">")) {
                closed = false;
            } else if (accept("<=")) {
                upper = false;
            } else if (accept("<")) {
                upper = false;
                closed = false;
            } else {
                fail("expected a comparison");
            }
            const double b = expr();
            expect(")");
            return Region::cap(model_, b, upper, closed);
        }
        if (name == "band") {
            need(SurfaceKind::Sphere, "band");
            expect("(");
            expect("|");
            if (ident() != "lat") fail("band expects '|lat|'");
            expect("|");
            bool closed = true;
            if (accept("<=")) {
            } else if (accept("<")) {
                closed = false;
            } else {
                fail("expected '<' or '<='");
            }
            const double a = expr();
            expect(")");
            if (!(a > 0.0)) fail("band half-width must be positive");
            return Region::band(model_, a, closed);
        }
        if (name == "strip") {
            need(SurfaceKind::Torus, "strip");
            bool closed = false;
            if (accept("[")) closed = true;
            else expect("(");
            const double lo = expr();
            expect(",");
            const double hi = expr();
            int axis = 0;
            if (accept(",")) {
                const std::string ax = ident();
                if (ax == "x1") axis = 0;
                else if (ax == "x2") axis = 1;
                else fail("strip axis must be x1 or x2");
            }
            expect(closed ? "]" : ")");
            if (!(hi > lo) || hi - lo >= kTwoPi) fail("strip needs lo < hi < lo + 2pi");
            return Region::strip(model_, lo, hi, axis, closed);
        }
        if (name == "tube" || name == "ctube") {
            expect("(");
            Curve c = curve();
            expect(",");
            const double r = expr();
            expect(")");
            if (!(r > 0.0)) fail("tube radius must be positive");
            return Region::tube(c, r, name == "ctube");
        }
        if (name == "eps") {
            expect("(");
            Region r = region();
            expect(",");
            const double e = expr();
            expect(")");
            if (!(e > 0.0)) fail("eps must be positive");
            return eps_neighborhood(r, e);
        }
        if (name == "union" || name == "intersection" || name == "intersect") {
            expect("(");
            std::vector<Region> parts{region()};
            while (accept(",")) parts.push_back(region());
            expect(")");
            return name == "union" ? Region::union_of(parts) : Region::intersection_of(parts);
        }
        if (name == "complement") {
            expect("(");
            Region r = region();
            expect(")");
            return r.complement();
        }
        pos_ = start;
        fail("unknown region '" + name + "'");
    }

    Curve curve() {
        const std::size_t start = pos_;
        const std::string name = ident();
        if (name == "equator") {
            need(SurfaceKind::Sphere, "equator");
            double a = 0.0, len = kTwoPi;
            std::string label = "equator";
            if (accept("[")) {
                const std::size_t s = pos_;
                a = expr();
                expect(":");
                const double b = expr();
                label += "[" + std::string(text_.substr(s, pos_ - s)) + "]";
                expect("]");
                if (!(b > a)) fail("empty equator arc");
                len = b - a;
            }
            const Vec3 p(std::cos(a), std::sin(a), 0.0), v(-std::sin(a), std::cos(a), 0.0);
            return great_circle_arc(model_, model_.phase_from_embedded(p, v), len, label);
        }
        if (name == "meridian") {
            need(SurfaceKind::Sphere, "meridian");
            expect("(");
            const double phi = expr();
            expect(")");
            const Vec3 p(std::cos(phi), std::sin(phi), 0.0), v(0.0, 0.0, 1.0);
            return great_circle_arc(model_, model_.phase_from_embedded(p, v), kTwoPi,
                                    "meridian(" + num(phi) + ")");
        }
        if (name == "hline" || name == "vline") {
            need(SurfaceKind::Torus, name);
            expect("(");
            const double c = expr();
            expect(")");
            const bool h = name == "hline";
            return torus_segment(model_, h ? Vec2{0.0, c} : Vec2{c, 0.0}, h ? 0.0 : 0.5 * kPi, kTwoPi,
                                 name + "(" + num(c) + ")");
        }
        if (name == "seg") {
            need(SurfaceKind::Torus, "seg");
            expect("(");
            const double x1 = expr();
            expect(",");
            const double x2 = expr();
            expect(",");
            const double ang = expr();
            expect(",");
            const double len = expr();
            expect(")");
            if (!(len > 0.0)) fail("segment length must be positive");
            return torus_segment(model_, {x1, x2}, ang, len,
                                 "seg(" + num(x1) + "," + num(x2) + "," + num(ang) + "," + num(len) + ")");
        }
        pos_ = start;
        fail("unknown curve '" + name + "'");
    }

    const SurfaceModel& model_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Region make_region(const SurfaceModel& model, std::string_view descriptor) {
    return Parser(model, descriptor).region_only();
}

Curve make_curve(const SurfaceModel& model, std::string_view id) { return Parser(model, id).curve_only(); }

double parse_number(std::string_view text) { return Parser(SurfaceModel::sphere(), text).number_only(); }

// ---------------------------------------------------------------------------------------------
// Weights and observables

BaseWeight weight_of(const Region& region) {
    return BaseWeight{region.descriptor(),
                      [region](const ChartPoint& x) { return region.contains(x) ? 1.0 : 0.0; }, region.hints()};
}

std::string_view to_string(ObservableKind kind) {
    switch (kind) {
        case ObservableKind::Constant: return "constant";
        case ObservableKind::Pullback: return "pullback";
        case ObservableKind::Indicator: return "indicator";
        case ObservableKind::Mollified: return "mollified";
        case ObservableKind::Smooth: return "smooth";
    }
    return "smooth";
}

Observable Observable::constant(double c) {
    Observable o;
    o.kind_ = ObservableKind::Constant;
    o.label_ = num(c);
    o.lower_ = o.upper_ = c;
    o.eval_ = [c](const PhasePoint&) { return c; };
    o.base_ = [c](const ChartPoint&) { return c; };
    o.piece_ = [](const ChartPoint&) { return 0; };
    o.piecewise_constant_ = true;
    return o;
}

Observable Observable::pullback(std::string label, BaseFn f, double lower, double upper, BaseHints hints) {
    if (!(upper >= lower)) throw PreconditionError("observable bounds are inverted");
    Observable o;
    o.kind_ = ObservableKind::Pullback;
    o.label_ = std::move(label);
    o.lower_ = lower;
    o.upper_ = upper;
    o.eval_ = [f](const PhasePoint& z) { return f(z.base()); };
    o.base_ = std::move(f);
    o.piece_ = hints.piece;
    o.hints_ = std::move(hints);
    return o;
}

Observable Observable::smooth_symbol(std::string label, PhaseFn f, double lower, double upper) {
    if (!(upper >= lower)) throw PreconditionError("observable bounds are inverted");
    Observable o;
    o.kind_ = ObservableKind::Smooth;
    o.label_ = std::move(label);
    o.lower_ = lower;
    o.upper_ = upper;
    o.eval_ = std::move(f);
    return o;
}

Observable Observable::indicator(const Region& region) {
    Observable o;
    o.kind_ = ObservableKind::Indicator;
    o.label_ = "1[" + region.descriptor() + "]";
    o.lower_ = 0.0;
    o.upper_ = 1.0;
    o.eval_ = [region](const PhasePoint& z) { return region.contains(z.base()) ? 1.0 : 0.0; };
    o.base_ = [region](const ChartPoint& x) { return region.contains(x) ? 1.0 : 0.0; };
    o.hints_ = region.hints();
    o.piece_ = o.hints_.piece;
    o.piecewise_constant_ = true;
    o.region_ = region;
    return o;
}

double Observable::base_value(const ChartPoint& x) const {
    if (!base_) throw UnsupportedError("observable '" + label_ + "' is not a pullback from M");
    return base_(x);
}

BaseWeight Observable::base_weight() const {
    if (!base_) throw UnsupportedError("observable '" + label_ + "' is not a pullback from M");
    return BaseWeight{label_, base_, hints_};
}

Observable mollifier(const Region& region, int k) {
    if (k < 1) throw PreconditionError("mollifier index must be at least 1");
    const Region::Topology t = region.topology();
    if (t != Region::Topology::Open && t != Region::Topology::Closed) {
        throw UnsupportedError("mollifier needs an open or closed region, got " + std::string(to_string(t)) +
                               " for '" + region.descriptor() + "'");
    }
    const bool open = t == Region::Topology::Open;
    const double kk = k;
    Observable o;
    o.kind_ = ObservableKind::Mollified;
    o.label_ = "h" + std::to_string(k) + "[" + region.descriptor() + "]";
    o.lower_ = 0.0;
    o.upper_ = 1.0;
    if (open) {
        o.base_ = [region, kk](const ChartPoint& x) {
            return std::min(1.0, kk * std::max(0.0, -region.sdist(x)));
        };
        o.piece_ = [region, kk](const ChartPoint& x) {
            const double d = -region.sdist(x);
            if (d <= 0.0) return 0;
            return kk * d >= 1.0 ? 2 : 1;
        };
    } else {
        o.base_ = [region, kk](const ChartPoint& x) {
            return std::max(0.0, 1.0 - kk * std::max(0.0, region.sdist(x)));
        };
        o.piece_ = [region, kk](const ChartPoint& x) {
            const double d = region.sdist(x);
            if (d <= 0.0) return 2;
            return kk * d >= 1.0 ? 0 : 1;
        };
    }
    auto fn = o.base_;
    o.eval_ = [fn](const PhasePoint& z) { return fn(z.base()); };
    const double inner = open ? -1.0 / kk : 1.0 / kk;
    for (int axis = 0; axis < 2; ++axis) {
        auto& dst = axis == 0 ? o.hints_.u_breaks : o.hints_.v_breaks;
        for (double level : {0.0, inner}) {
            auto b = region.level_breaks(axis, level);
            dst.insert(dst.end(), b.begin(), b.end());
        }
    }
    o.hints_.piece = o.piece_;
    o.region_ = region;
    o.mollifier_k_ = k;
    return o;
}

double integrate(const SurfaceModel& model, const BaseWeight& weight, const BaseQuadratureSpec& spec) {
    double sum = 0.0;
    for (const BaseNode& n : base_quadrature(model, weight.hints, spec)) sum += n.weight * weight.f(n.x);
    return sum;
}

double area(const Region& region, const BaseQuadratureSpec& spec) {
    return integrate(region.model(), weight_of(region), spec);
}

double boundary_layer_area(const Region& region, double delta, const BaseQuadratureSpec& spec) {
    if (!(delta > 0.0)) throw PreconditionError("boundary layer width must be positive");
    BaseWeight w;
    w.label = "layer";
    w.f = [region, delta](const ChartPoint& x) { return std::abs(region.sdist(x)) < delta ? 1.0 : 0.0; };
    for (int axis = 0; axis < 2; ++axis) {
        auto& dst = axis == 0 ? w.hints.u_breaks : w.hints.v_breaks;
        for (double level : {-delta, delta}) {
            auto b = region.level_breaks(axis, level);
            dst.insert(dst.end(), b.begin(), b.end());
        }
    }
    w.hints.piece = [region, delta](const ChartPoint& x) { return std::abs(region.sdist(x)) < delta ? 1 : 0; };
    return integrate(region.model(), w, spec);
}

}  // namespace zoll
