#include "hsob/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>

namespace hsob {

bool BoundingBox::contains(const Point& x, double slack) const {
    for (int i = 0; i < dim; ++i) {
        if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
    }
    return true;
}

double BoundingBox::diameter() const { return dist(lo, hi); }

double BoundingBox::max_extent() const {
    double e = 0.0;
    for (int i = 0; i < dim; ++i) e = std::max(e, hi[i] - lo[i]);
    return e;
}

const char* to_string(DomainKind kind) {
    switch (kind) {
        case DomainKind::rectangle: return "rectangle";
        case DomainKind::polygon: return "polygon";
        case DomainKind::graph: return "graph";
        case DomainKind::complement: return "complement";
    }
    return "?";
}

double segment_distance(const Point& x, const Point& a, const Point& b, Point* nearest) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(dot(x - a, ab) / len2, 0.0, 1.0);
    const Point q = a + t * ab;
    if (nearest) *nearest = q;
    return dist(x, q);
}

namespace {

void check_bbox(const BoundingBox& bbox) {
    require(bbox.dim >= 1 && bbox.dim <= kMaxDim, ErrorKind::parameter, "dimension must be 1..3");
    for (int i = 0; i < bbox.dim; ++i) {
        require(bbox.lo[i] < bbox.hi[i], ErrorKind::parameter, "bounding box must have positive extent");
    }
}

double signed_area(const std::vector<Point>& v) {
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& p = v[i];
        const Point& q = v[(i + 1) % v.size()];
        a += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * a;
}

}  // namespace

DomainShape DomainShape::rectangle(const Point& lo, const Point& hi, int dim, const BoundingBox& bbox) {
    check_bbox(bbox);
    require(dim == bbox.dim, ErrorKind::parameter, "rectangle dimension differs from bounding box");
    DomainShape d;
    d.kind_ = DomainKind::rectangle;
    d.bbox_ = bbox;
    d.lo_ = lo;
    d.hi_ = hi;
    for (int i = 0; i < dim; ++i) {
        require(lo[i] <= hi[i], ErrorKind::parameter, "rectangle corners out of order");
    }
    for (int i = dim; i < kMaxDim; ++i) d.lo_[i] = d.hi_[i] = 0.0;
    return d;
}

DomainShape DomainShape::polygon(std::vector<Point> vertices, const BoundingBox& bbox) {
    check_bbox(bbox);
    require(bbox.dim == 2, ErrorKind::parameter, "polygons live in R^2");
    require(vertices.size() >= 3, ErrorKind::parameter, "polygon needs at least 3 vertices");
    if (signed_area(vertices) < 0.0) std::reverse(vertices.begin(), vertices.end());
    for (auto& v : vertices) v[2] = 0.0;
    DomainShape d;
    d.kind_ = DomainKind::polygon;
    d.bbox_ = bbox;
    d.vertices_ = std::move(vertices);
    return d;
}

DomainShape DomainShape::graph(double y0, double y1, std::vector<double> samples, double lipschitz,
                               const BoundingBox& bbox) {
    check_bbox(bbox);
    require(bbox.dim == 2, ErrorKind::parameter, "graph domains live in R^2");
    require(samples.size() >= 2, ErrorKind::parameter, "graph needs at least 2 samples");
    require(y0 < y1, ErrorKind::parameter, "graph sample range must be increasing");
    require(lipschitz >= 0.0, ErrorKind::parameter, "Lipschitz constant must be nonnegative");
    const double dy = (y1 - y0) / static_cast<double>(samples.size() - 1);
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        const double slope = std::abs(samples[k + 1] - samples[k]) / dy;
        if (slope > lipschitz * (1.0 + 1e-12) + 1e-12) {
            std::ostringstream os;
            os << "graph slope " << slope << " at sample " << k << " exceeds declared Lipschitz constant "
               << lipschitz;
            fail(ErrorKind::precondition, os.str());
        }
    }
    DomainShape d;
    d.kind_ = DomainKind::graph;
    d.bbox_ = bbox;
    d.y0_ = y0;
    d.y1_ = y1;
    d.samples_ = std::move(samples);
    d.lipschitz_ = lipschitz;
    return d;
}

DomainShape DomainShape::complement(const DomainShape& inner, const BoundingBox& bbox) {
    check_bbox(bbox);
    require(inner.kind() == DomainKind::rectangle || inner.kind() == DomainKind::polygon, ErrorKind::parameter,
            "complement domains take a rectangle or polygon");
    require(inner.dim() == bbox.dim, ErrorKind::parameter, "complement dimension differs from bounding box");
    DomainShape d;
    d.kind_ = DomainKind::complement;
    d.bbox_ = bbox;
    d.inner_ = std::make_shared<const DomainShape>(inner);
    return d;
}

DomainShape DomainShape::disk(const Point& center, double radius, int sides, const BoundingBox& bbox) {
    require(sides >= 3, ErrorKind::parameter, "disk approximation needs at least 3 sides");
    std::vector<Point> v;
    v.reserve(static_cast<std::size_t>(sides));
    for (int k = 0; k < sides; ++k) {
        const double a = 2.0 * std::numbers::pi * k / sides;
        v.push_back({center[0] + radius * std::cos(a), center[1] + radius * std::sin(a), 0.0});
    }
    return polygon(std::move(v), bbox);
}

double DomainShape::height(double y) const {
    const double n = static_cast<double>(samples_.size() - 1);
    const double s = std::clamp((y - y0_) / (y1_ - y0_), 0.0, 1.0) * n;
    const auto k = std::min(static_cast<std::size_t>(s), samples_.size() - 2);
    const double w = s - static_cast<double>(k);
    return (1.0 - w) * samples_[k] + w * samples_[k + 1];
}

bool DomainShape::inside_closed(const Point& x) const {
    switch (kind_) {
        case DomainKind::rectangle:
            for (int i = 0; i < dim(); ++i) {
                if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
            }
            return true;
        case DomainKind::polygon: {
            bool in = false;
            const std::size_t n = vertices_.size();
            for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
                const Point& a = vertices_[i];
                const Point& b = vertices_[j];
                if ((a[1] > x[1]) != (b[1] > x[1])) {
                    const double xs = (b[0] - a[0]) * (x[1] - a[1]) / (b[1] - a[1]) + a[0];
                    if (x[0] < xs) in = !in;
                }
            }
            return in || distance_unchecked(x) == 0.0;
        }
        case DomainKind::graph: return x[1] <= height(x[0]);
        case DomainKind::complement: return !inner_->contains(x);
    }
    return false;
}

bool DomainShape::contains(const Point& x) const {
    if (kind_ == DomainKind::graph) return x[1] < height(x[0]);
    if (kind_ == DomainKind::complement) return !inner_->inside_closed(x);
    return inside_closed(x) && distance_unchecked(x) > 0.0;
}

double DomainShape::distance_to_boundary(const Point& x) const {
    const double slack = 1e-12 * std::max(1.0, bbox_.diameter());
    if (!bbox_.contains(x, slack)) {
        std::ostringstream os;
        os << "point (" << x[0] << ", " << x[1] << ", " << x[2] << ") outside the bounding box";
        fail(ErrorKind::domain, os.str());
    }
    return distance_unchecked(x);
}

double DomainShape::distance_unchecked(const Point& x) const {
    return dist(x, nearest_boundary_point(x));
}

Point DomainShape::nearest_boundary_point(const Point& x) const {
    switch (kind_) {
        case DomainKind::rectangle: {
            Point q = x;
            bool outside = false;
            for (int i = 0; i < dim(); ++i) {
                if (x[i] < lo_[i] || x[i] > hi_[i]) outside = true;
                q[i] = std::clamp(x[i], lo_[i], hi_[i]);
            }
            if (outside) return q;
            int best_axis = 0;
            double best = std::numeric_limits<double>::infinity();
            bool to_hi = false;
            for (int i = 0; i < dim(); ++i) {
                if (x[i] - lo_[i] < best) { best = x[i] - lo_[i]; best_axis = i; to_hi = false; }
                if (hi_[i] - x[i] < best) { best = hi_[i] - x[i]; best_axis = i; to_hi = true; }
            }
            q[best_axis] = to_hi ? hi_[best_axis] : lo_[best_axis];
            return q;
        }
        case DomainKind::polygon: {
            double best = std::numeric_limits<double>::infinity();
            Point bq{};
            const std::size_t n = vertices_.size();
            for (std::size_t i = 0; i < n; ++i) {
                Point q;
                const double d = segment_distance(x, vertices_[i], vertices_[(i + 1) % n], &q);
                if (d < best) { best = d; bq = q; }
            }
            return bq;
        }
        case DomainKind::graph: {
            const std::size_t n = samples_.size();
            const double dy = (y1_ - y0_) / static_cast<double>(n - 1);
            const double far = std::max(1.0, bbox_.diameter()) * 4.0 + std::abs(x[0]);
            double best = std::numeric_limits<double>::infinity();
            Point bq{};
            auto visit = [&](const Point& a, const Point& b) {
                Point q;
                const double d = segment_distance(x, a, b, &q);
                if (d < best) { best = d; bq = q; }
            };
            visit({y0_ - far, samples_.front(), 0.0}, {y0_, samples_.front(), 0.0});
            visit({y1_, samples_.back(), 0.0}, {y1_ + far, samples_.back(), 0.0});
            // Only segments whose y-range can beat the current best need visiting.
            for (std::size_t k = 0; k + 1 < n; ++k) {
                const double ya = y0_ + dy * static_cast<double>(k);
                const double yb = ya + dy;
                const double gap = std::max({0.0, ya - x[0], x[0] - yb});
                if (gap >= best) continue;
                visit({ya, samples_[k], 0.0}, {yb, samples_[k + 1], 0.0});
            }
            return bq;
        }
        case DomainKind::complement: return inner_->nearest_boundary_point(x);
    }
    return x;
}

bool DomainShape::collar_fits(double width) const {
    switch (kind_) {
        case DomainKind::rectangle:
            for (int i = 0; i < dim(); ++i) {
                if (lo_[i] - width < bbox_.lo[i] || hi_[i] + width > bbox_.hi[i]) return false;
            }
            return true;
        case DomainKind::polygon: {
            for (const auto& v : vertices_) {
                for (int i = 0; i < 2; ++i) {
                    if (v[i] - width < bbox_.lo[i] || v[i] + width > bbox_.hi[i]) return false;
                }
            }
            return true;
        }
        case DomainKind::graph: {
            const double top = *std::max_element(samples_.begin(), samples_.end());
            return top + width <= bbox_.hi[1];
        }
        case DomainKind::complement: return true;
    }
    return false;
}

bool DomainShape::is_convex() const {
    if (kind_ == DomainKind::rectangle) return true;
    if (kind_ != DomainKind::polygon) return false;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = vertices_[i];
        const Point& b = vertices_[(i + 1) % n];
        const Point& c = vertices_[(i + 2) % n];
        const double cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        if (cross < 0.0) return false;
    }
    return true;
}

Point lipschitz_reflection(const DomainShape& domain, const Point& x) {
    require(domain.kind() == DomainKind::graph, ErrorKind::unsupported, "reflection needs a graph domain");
    if (x[0] < domain.graph_y0() || x[0] > domain.graph_y1()) {
        fail(ErrorKind::domain, "reflection point outside the sampled graph range");
    }
    const double h = domain.height(x[0]);
    if (!(x[1] < h)) fail(ErrorKind::domain, "reflection point not strictly below the graph");
    const Point r{x[0], 2.0 * h - x[1], 0.0};
    if (!domain.bbox().contains(r)) fail(ErrorKind::domain, "reflected point leaves the bounding box");
    return r;
}

double reflection_constant(const DomainShape& domain) {
    return 2.0 * std::sqrt(1.0 + domain.lipschitz() * domain.lipschitz());
}

}  // namespace hsob
