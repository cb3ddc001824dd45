#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "hsob/common.hpp"

namespace hsob {

struct Ball {
    Point center{};
    double radius = 0.0;

    Ball dilate(double factor) const { return {center, factor * radius}; }
    bool contains(const Point& x) const { return dist(x, center) <= radius; }
};

/// Closed balls intersect iff the center distance is at most the radius sum.
inline bool intersects(const Ball& a, const Ball& b) {
    return dist(a.center, b.center) <= a.radius + b.radius;
}

struct BoundingBox {
    Point lo{};
    Point hi{};
    int dim = 2;

    bool contains(const Point& x, double slack = 0.0) const;
    double diameter() const;
    double max_extent() const;
};

enum class DomainKind { rectangle, polygon, graph, complement };

const char* to_string(DomainKind kind);

/// A bounded-description domain with an exact distance-to-boundary oracle.
///
/// * rectangle: axis-aligned box in R^n, n = 1..3.
/// * polygon: simple polygon in R^2 (either orientation).
/// * graph: the subgraph {(y, t) : t < h(y)} in R^2, with h the piecewise-linear
///   interpolant of uniform samples on [y0, y1], continued as a constant
///   outside the sampled range.
/// * complement: R^n minus the closure of an inner rectangle or polygon.
///
/// Every query point must lie in the bounding box.
class DomainShape {
public:
    static DomainShape rectangle(const Point& lo, const Point& hi, int dim, const BoundingBox& bbox);
    static DomainShape polygon(std::vector<Point> vertices, const BoundingBox& bbox);
    static DomainShape graph(double y0, double y1, std::vector<double> samples, double lipschitz,
                             const BoundingBox& bbox);
    static DomainShape complement(const DomainShape& inner, const BoundingBox& bbox);

    /// Regular polygon approximating the disk B(center, radius).
    static DomainShape disk(const Point& center, double radius, int sides, const BoundingBox& bbox);

    DomainKind kind() const { return kind_; }
    int dim() const { return bbox_.dim; }
    const BoundingBox& bbox() const { return bbox_; }

    /// d(x, boundary); throws ErrorKind::domain outside the bounding box.
    double distance_to_boundary(const Point& x) const;
    /// Same oracle without the bounding-box check.
    double distance_unchecked(const Point& x) const;
    /// x in the open domain.
    bool contains(const Point& x) const;
    Point nearest_boundary_point(const Point& x) const;

    /// True when {x outside the domain : d(x, domain) <= width} lies in the bounding box.
    bool collar_fits(double width) const;

    bool is_convex() const;
    const std::vector<Point>& vertices() const { return vertices_; }

    // graph kind
    double height(double y) const;
    double lipschitz() const { return lipschitz_; }
    double graph_y0() const { return y0_; }
    double graph_y1() const { return y1_; }
    const std::vector<double>& samples() const { return samples_; }

    // rectangle kind
    const Point& rect_lo() const { return lo_; }
    const Point& rect_hi() const { return hi_; }

    const DomainShape* inner() const { return inner_.get(); }

private:
    DomainKind kind_ = DomainKind::rectangle;
    BoundingBox bbox_{};
    Point lo_{}, hi_{};
    std::vector<Point> vertices_;
    double y0_ = 0.0, y1_ = 1.0, lipschitz_ = 0.0;
    std::vector<double> samples_;
    std::shared_ptr<const DomainShape> inner_;

    bool inside_closed(const Point& x) const;
};

/// Distance from x to the closed segment [a, b], with the nearest point.
double segment_distance(const Point& x, const Point& a, const Point& b, Point* nearest = nullptr);

/// H(y, t) = (y, 2h(y) - t) for a graph domain; requires t < h(y), y inside
/// the sampled range, and H(x) inside the bounding box.
Point lipschitz_reflection(const DomainShape& domain, const Point& x);

/// Constant c1 with |H(x) - x| <= c1 d(x, boundary): 2 sqrt(1 + L^2).
double reflection_constant(const DomainShape& domain);

}  // namespace hsob
