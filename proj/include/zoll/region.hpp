#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zoll/base_quadrature.hpp"
#include "zoll/surface.hpp"

namespace zoll {

/// A geodesic segment: a great-circle arc on the sphere or a straight segment on the torus.
/// Lengths of 2pi or more on the sphere denote the full great circle.
struct Curve {
    SurfaceModel model;
    PhasePoint start;
    double length = kTwoPi;
    std::string label;

    /// Geodesic distance from x to the curve.
    double distance(const ChartPoint& x) const;
};

Curve great_circle_arc(const SurfaceModel& sphere, const PhasePoint& start, double length,
                       std::string label = {});
Curve torus_segment(const SurfaceModel& torus, Vec2 start, double angle, double length,
                    std::string label = {});

/// A subset of M with exact membership, signed distance (negative inside) and a topology tag.
class Region {
public:
    enum class Topology { Open, Closed, Clopen, Other };

    struct Node;

    bool contains(const ChartPoint& x) const;
    /// Signed distance to the boundary: distance to the region outside, minus the distance to the
    /// complement inside. Exact for primitives; min/max composed for boolean combinations.
    double sdist(const ChartPoint& x) const;
    Topology topology() const;
    const std::string& descriptor() const;
    const SurfaceModel& model() const { return model_; }

    /// Canonical-axis coordinates where sdist may cross `level` (quadrature breakpoints).
    std::vector<double> level_breaks(int axis, double level) const;

    /// Quadrature hints for the indicator of this region.
    BaseHints hints() const;

    Region complement() const;
    static Region full(const SurfaceModel& model);
    static Region empty(const SurfaceModel& model);
    static Region union_of(const std::vector<Region>& parts);
    static Region intersection_of(const std::vector<Region>& parts);

    /// Sphere cap {lat >= b} (closed) or {lat > b} (open); `upper` false flips to lat <= b.
    static Region cap(const SurfaceModel& sphere, double boundary_lat, bool upper, bool closed);
    /// Sphere band {|lat| <= a} or {|lat| < a}.
    static Region band(const SurfaceModel& sphere, double half_width, bool closed);
    /// Torus strip {lo < x_axis < hi} or closed version, coordinates taken mod 2pi.
    static Region strip(const SurfaceModel& torus, double lo, double hi, int axis, bool closed);
    /// Tube {d(x, curve) < r} or {<= r}.
    static Region tube(const Curve& curve, double radius, bool closed);

    /// Wrap a custom node; used by derived constructions such as neighborhoods.
    static Region from_node(SurfaceModel model, std::shared_ptr<const Node> node) {
        return Region(std::move(model), std::move(node));
    }

private:
    Region(SurfaceModel model, std::shared_ptr<const Node> node)
        : model_(std::move(model)), node_(std::move(node)) {}
    SurfaceModel model_;
    std::shared_ptr<const Node> node_;
};

std::string_view to_string(Region::Topology t);

/// Parse a region descriptor such as `union(cap(lat>=pi/4),band(|lat|<0.1))`.
/// Grammar is documented in docs/region-descriptors.md. Throws ParseError.
Region make_region(const SurfaceModel& model, std::string_view descriptor);

/// Parse a curve id such as `equator`, `equator[0:pi/2]`, `meridian(0)`, `vline(pi)`,
/// `hline(0)` or `seg(x1,x2,angle,length)`.
Curve make_curve(const SurfaceModel& model, std::string_view id);

/// Arithmetic expression over numbers and `pi` with + - * / and parentheses, e.g. `3*pi/4`.
double parse_number(std::string_view text);

/// Open epsilon-neighborhood {x : sdist(x) < eps}.
Region eps_neighborhood(const Region& region, double eps);
Region eps_neighborhood(const Curve& curve, double eps);

/// A function on M used as a quadrature weight (mass matrices, pushforwards).
struct BaseWeight {
    std::string label;
    std::function<double(const ChartPoint&)> f;
    BaseHints hints;
};

BaseWeight weight_of(const Region& region);

enum class ObservableKind { Constant, Pullback, Indicator, Mollified, Smooth };

std::string_view to_string(ObservableKind kind);

/// A bounded function on S*M. Pullback-type observables also expose their base function.
class Observable {
public:
    using PhaseFn = std::function<double(const PhasePoint&)>;
    using BaseFn = std::function<double(const ChartPoint&)>;
    using PieceFn = std::function<int(const ChartPoint&)>;

    static Observable constant(double c);
    static Observable pullback(std::string label, BaseFn f, double lower, double upper,
                               BaseHints hints = {});
    static Observable smooth_symbol(std::string label, PhaseFn f, double lower, double upper);
    static Observable indicator(const Region& region);

    double operator()(const PhasePoint& z) const { return eval_(z); }

    ObservableKind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    double lower() const { return lower_; }
    double upper() const { return upper_; }
    bool is_pullback() const { return static_cast<bool>(base_); }
    /// Base function f with a = f o pi. Throws UnsupportedError for genuine phase-space symbols.
    double base_value(const ChartPoint& x) const;
    BaseWeight base_weight() const;

    /// Piece label along orbits: the observable is smooth (or constant) where it is fixed.
    bool has_pieces() const { return static_cast<bool>(piece_); }
    int piece(const ChartPoint& x) const { return piece_(x); }
    bool piecewise_constant() const { return piecewise_constant_; }

    /// Region behind an indicator or mollifier.
    const std::optional<Region>& source_region() const { return region_; }
    int mollifier_index() const { return mollifier_k_; }

    friend Observable mollifier(const Region& region, int k);

private:
    Observable() = default;

    ObservableKind kind_ = ObservableKind::Constant;
    std::string label_;
    double lower_ = 0.0;
    double upper_ = 0.0;
    PhaseFn eval_;
    BaseFn base_;
    PieceFn piece_;
    bool piecewise_constant_ = false;
    BaseHints hints_;
    std::optional<Region> region_;
    int mollifier_k_ = 0;
};

/// The distance-based approximation of an indicator: for open regions
/// h_k = min(1, k d(x, complement)) increases to the indicator, for closed regions
/// h_k = max(0, 1 - k d(x, region)) decreases to it. Throws UnsupportedError for other tags.
Observable mollifier(const Region& region, int k);

/// Area of a region, or integral of a weight, by adaptive product quadrature.
double area(const Region& region, const BaseQuadratureSpec& spec = {});
double integrate(const SurfaceModel& model, const BaseWeight& weight, const BaseQuadratureSpec& spec = {});

/// Measure of the boundary layer {|sdist| < delta}; shrinking values flag Jordan-measurable sets.
double boundary_layer_area(const Region& region, double delta, const BaseQuadratureSpec& spec = {});

}  // namespace zoll
