#include "hsob/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace hsob {

MetricCloud MetricCloud::grid(const Point& origin, double spacing, std::array<int, 3> shape, int dim) {
    require(dim >= 1 && dim <= kMaxDim, ErrorKind::parameter, "dimension must be 1..3");
    require(spacing > 0.0, ErrorKind::parameter, "grid spacing must be positive");
    for (int i = dim; i < kMaxDim; ++i) shape[i] = 1;
    for (int i = 0; i < dim; ++i) require(shape[i] >= 1, ErrorKind::parameter, "grid shape must be positive");
    MetricCloud c;
    c.dim_ = dim;
    c.is_grid_ = true;
    c.grid_ = {origin, spacing, shape};
    for (int i = dim; i < kMaxDim; ++i) c.grid_.origin[i] = 0.0;
    const std::size_t n = static_cast<std::size_t>(shape[0]) * shape[1] * shape[2];
    c.points_.resize(n);
    c.measures_.assign(n, std::pow(spacing, dim));
    for (int k = 0; k < shape[2]; ++k) {
        for (int j = 0; j < shape[1]; ++j) {
            for (int i = 0; i < shape[0]; ++i) {
                Point p = c.grid_.origin;
                p[0] += spacing * i;
                p[1] += spacing * j;
                p[2] += spacing * k;
                c.points_[c.flat_index(i, j, k)] = p;
            }
        }
    }
    c.resolution_ = spacing;
    return c;
}

MetricCloud MetricCloud::unit_grid(int n, int dim, double lo, double hi) {
    require(n >= 2, ErrorKind::parameter, "unit grid needs at least 2 points per axis");
    std::array<int, 3> shape{1, 1, 1};
    for (int i = 0; i < dim; ++i) shape[i] = n;
    return grid({lo, lo, lo}, (hi - lo) / (n - 1), shape, dim);
}

MetricCloud MetricCloud::irregular(std::vector<Point> points, std::vector<double> measures, int dim) {
    require(dim >= 1 && dim <= kMaxDim, ErrorKind::parameter, "dimension must be 1..3");
    require(points.size() == measures.size(), ErrorKind::parameter, "points and measures differ in length");
    for (double m : measures) require(m > 0.0, ErrorKind::parameter, "cell measures must be positive");
    MetricCloud c;
    c.dim_ = dim;
    c.points_ = std::move(points);
    for (auto& p : c.points_) {
        for (int i = dim; i < kMaxDim; ++i) p[i] = 0.0;
    }
    c.measures_ = std::move(measures);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.points_.size(); ++i) {
        for (std::size_t j = i + 1; j < c.points_.size(); ++j) {
            best = std::min(best, dist(c.points_[i], c.points_[j]));
        }
    }
    c.resolution_ = std::isfinite(best) ? best : 1.0;
    return c;
}

std::array<int, 3> MetricCloud::multi_index(std::size_t idx) const {
    const auto& s = grid_.shape;
    const int i = static_cast<int>(idx % static_cast<std::size_t>(s[0]));
    const std::size_t rest = idx / static_cast<std::size_t>(s[0]);
    const int j = static_cast<int>(rest % static_cast<std::size_t>(s[1]));
    const int k = static_cast<int>(rest / static_cast<std::size_t>(s[1]));
    return {i, j, k};
}

std::size_t MetricCloud::flat_index(int i, int j, int k) const {
    const auto& s = grid_.shape;
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(s[0]) *
                                             (static_cast<std::size_t>(j) + static_cast<std::size_t>(s[1]) * k);
}

BoundingBox MetricCloud::bbox() const {
    BoundingBox b;
    b.dim = dim_;
    if (points_.empty()) return b;
    b.lo = b.hi = points_.front();
    for (const auto& p : points_) {
        for (int i = 0; i < dim_; ++i) {
            b.lo[i] = std::min(b.lo[i], p[i]);
            b.hi[i] = std::max(b.hi[i], p[i]);
        }
    }
    return b;
}

double MetricCloud::diameter() const { return bbox().diameter(); }

double MetricCloud::resolution() const { return resolution_; }

std::size_t MetricCloud::nearest(const Point& x) const {
    require(!points_.empty(), ErrorKind::domain, "empty cloud");
    if (is_grid_) {
        std::array<int, 3> id{0, 0, 0};
        for (int a = 0; a < dim_; ++a) {
            const double s = std::round((x[a] - grid_.origin[a]) / grid_.spacing);
            id[a] = static_cast<int>(std::clamp(s, 0.0, static_cast<double>(grid_.shape[a] - 1)));
        }
        return flat_index(id[0], id[1], id[2]);
    }
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double d = dist(points_[i], x);
        if (d < bd) { bd = d; best = i; }
    }
    return best;
}

MetricCloud MetricCloud::dilated(double lambda) const {
    require(lambda > 0.0, ErrorKind::parameter, "dilation factor must be positive");
    if (is_grid_) return grid(lambda * grid_.origin, lambda * grid_.spacing, grid_.shape, dim_);
    std::vector<Point> pts;
    pts.reserve(points_.size());
    for (const auto& p : points_) pts.push_back(lambda * p);
    std::vector<double> m = measures_;
    for (double& v : m) v *= std::pow(lambda, dim_);
    return irregular(std::move(pts), std::move(m), dim_);
}

// --- SampledField ------------------------------------------------------------

SampledField::SampledField(CloudPtr c, std::vector<double> v, std::vector<std::uint8_t> m)
    : cloud(std::move(c)), values(std::move(v)), mask(std::move(m)) {
    require(cloud != nullptr, ErrorKind::parameter, "field needs a cloud");
    require(values.size() == cloud->size(), ErrorKind::parameter, "field size differs from cloud size");
    require(mask.empty() || mask.size() == values.size(), ErrorKind::parameter, "mask size differs from cloud size");
    for (std::size_t i = 0; i < values.size(); ++i) {
        require(std::isfinite(values[i]), ErrorKind::parameter, "field values must be finite");
        if (!active(i)) values[i] = 0.0;
    }
}

SampledField SampledField::from_function(CloudPtr c, const std::function<double(const Point&)>& fn) {
    std::vector<double> v(c->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(c->point(i));
    return SampledField(std::move(c), std::move(v));
}

SampledField SampledField::with_values(std::vector<double> v) const { return SampledField(cloud, std::move(v), mask); }

std::vector<double> radius_ladder(const MetricCloud& cloud, double cap, const LadderSpec& spec) {
    require(spec.per_octave >= 1, ErrorKind::parameter, "ladder density must be at least 1 per octave");
    require(cap >= 0.0, ErrorKind::parameter, "radius cap must be nonnegative");
    std::vector<double> r{0.0};
    const double bound = std::min(cap, cloud.diameter());
    const double base = spec.base > 0.0 ? spec.base : cloud.resolution();
    for (int k = 0;; ++k) {
        const double rk = base * std::exp2(static_cast<double>(k) / spec.per_octave);
        if (rk > bound) break;
        r.push_back(rk);
    }
    if (cap >= cloud.diameter() && bound > r.back()) r.push_back(bound);
    return r;
}

double lp_quasinorm(const SampledField& f, double p) {
    require(p > 0.0, ErrorKind::parameter, "exponent p must be positive");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!f.active(i)) continue;
        s += f.measure(i) * std::pow(std::abs(f.values[i]), p);
    }
    return std::pow(s, 1.0 / p);
}

// --- Differences -------------------------------------------------------------

std::vector<SampledField> finite_difference_gradient(const SampledField& f) {
    const MetricCloud& c = *f.cloud;
    require(c.is_grid(), ErrorKind::unsupported, "finite differences need a uniform grid");
    const int n = c.dim();
    const double h = c.grid_spec().spacing;
    const auto& shape = c.grid_spec().shape;
    std::vector<SampledField> out;
    for (int a = 0; a < n; ++a) {
        std::vector<double> g(f.size(), 0.0);
        for (std::size_t idx = 0; idx < f.size(); ++idx) {
            if (!f.active(idx)) continue;
            auto id = c.multi_index(idx);
            auto neighbour = [&](int off) -> long {
                auto m = id;
                m[a] += off;
                if (m[a] < 0 || m[a] >= shape[a]) return -1;
                const std::size_t j = c.flat_index(m[0], m[1], m[2]);
                return f.active(j) ? static_cast<long>(j) : -1;
            };
            const long lo = neighbour(-1);
            const long hi = neighbour(+1);
            if (lo >= 0 && hi >= 0) {
                g[idx] = (f.values[static_cast<std::size_t>(hi)] - f.values[static_cast<std::size_t>(lo)]) / (2.0 * h);
            } else if (hi >= 0) {
                g[idx] = (f.values[static_cast<std::size_t>(hi)] - f.values[idx]) / h;
            } else if (lo >= 0) {
                g[idx] = (f.values[idx] - f.values[static_cast<std::size_t>(lo)]) / h;
            }
        }
        out.push_back(f.with_values(std::move(g)));
    }
    return out;
}

SampledField gradient_magnitude_max(const std::vector<SampledField>& grad) {
    require(!grad.empty(), ErrorKind::parameter, "empty gradient");
    std::vector<double> v(grad.front().size(), 0.0);
    for (const auto& g : grad) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(v[i], std::abs(g.values[i]));
    }
    return grad.front().with_values(std::move(v));
}

// --- I/O ---------------------------------------------------------------------

void write_field_csv(const std::string& path, const SampledField& f) {
    std::ofstream os(path);
    if (!os) fail(ErrorKind::io, "cannot open " + path + " for writing");
    const int n = f.cloud->dim();
    static const char* names[] = {"x", "y", "z"};
    for (int a = 0; a < n; ++a) os << names[a] << ',';
    os << "measure,value,active\n";
    os.precision(17);
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (int a = 0; a < n; ++a) os << f.point(i)[a] << ',';
        os << f.measure(i) << ',' << f.values[i] << ',' << (f.active(i) ? 1 : 0) << '\n';
    }
    if (!os) fail(ErrorKind::io, "write failed: " + path);
}

SampledField read_field_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail(ErrorKind::io, "cannot open " + path);
    std::string header;
    std::getline(is, header);
    const int commas = static_cast<int>(std::count(header.begin(), header.end(), ','));
    const int dim = commas - 2;
    require(dim >= 1 && dim <= kMaxDim, ErrorKind::io, "unrecognized field CSV header in " + path);
    std::vector<Point> pts;
    std::vector<double> meas, vals;
    std::vector<std::uint8_t> mask;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        require(static_cast<int>(row.size()) == dim + 3, ErrorKind::io, "malformed row in " + path);
        Point p{};
        for (int a = 0; a < dim; ++a) p[a] = row[static_cast<std::size_t>(a)];
        pts.push_back(p);
        meas.push_back(row[static_cast<std::size_t>(dim)]);
        vals.push_back(row[static_cast<std::size_t>(dim) + 1]);
        mask.push_back(row[static_cast<std::size_t>(dim) + 2] != 0.0 ? 1 : 0);
    }
    const bool all_active = std::all_of(mask.begin(), mask.end(), [](std::uint8_t m) { return m != 0; });
    auto cloud = std::make_shared<const MetricCloud>(MetricCloud::irregular(std::move(pts), std::move(meas), dim));
    return SampledField(cloud, std::move(vals), all_active ? std::vector<std::uint8_t>{} : std::move(mask));
}

namespace {

constexpr char kMagic[8] = {'H', 'S', 'O', 'B', 'F', 'L', 'D', '1'};

template <class T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) fail(ErrorKind::io, "truncated binary field");
    return v;
}

}  // namespace

void write_field_binary(const std::string& path, const SampledField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorKind::io, "cannot open " + path + " for writing");
    os.write(kMagic, sizeof kMagic);
    const auto dim = static_cast<std::uint32_t>(f.cloud->dim());
    const auto count = static_cast<std::uint64_t>(f.size());
    put(os, dim);
    put(os, count);
    for (std::uint32_t a = 0; a < dim; ++a) {
        for (std::size_t i = 0; i < f.size(); ++i) put(os, f.point(i)[a]);
    }
    for (std::size_t i = 0; i < f.size(); ++i) put(os, f.measure(i));
    for (double v : f.values) put(os, v);
    for (std::size_t i = 0; i < f.size(); ++i) put(os, static_cast<std::uint8_t>(f.active(i) ? 1 : 0));
    if (!os) fail(ErrorKind::io, "write failed: " + path);
}

SampledField read_field_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) fail(ErrorKind::io, "cannot open " + path);
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) fail(ErrorKind::io, "bad magic in " + path);
    const auto dim = get<std::uint32_t>(is);
    const auto count = get<std::uint64_t>(is);
    require(dim >= 1 && dim <= kMaxDim, ErrorKind::io, "bad dimension in " + path);
    std::vector<Point> pts(count, Point{});
    for (std::uint32_t a = 0; a < dim; ++a) {
        for (auto& p : pts) p[a] = get<double>(is);
    }
    std::vector<double> meas(count), vals(count);
    std::vector<std::uint8_t> mask(count);
    for (auto& m : meas) m = get<double>(is);
    for (auto& v : vals) v = get<double>(is);
    for (auto& m : mask) m = get<std::uint8_t>(is);
    const bool all_active = std::all_of(mask.begin(), mask.end(), [](std::uint8_t m) { return m != 0; });
    auto cloud = std::make_shared<const MetricCloud>(
        MetricCloud::irregular(std::move(pts), std::move(meas), static_cast<int>(dim)));
    return SampledField(cloud, std::move(vals), all_active ? std::vector<std::uint8_t>{} : std::move(mask));
}

}  // namespace hsob
