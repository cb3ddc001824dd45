#include "hsob/experiment.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "hsob/corpus.hpp"
#include "hsob/extension.hpp"
#include "hsob/hajlasz.hpp"
#include "hsob/hardy.hpp"
#include "hsob/serialize.hpp"
#include "json.hpp"

namespace hsob {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(ErrorKind::config, std::string("config key '") + key + "': " + e.what());
    }
}

json doc(const ExperimentConfig& cfg) { return json::parse(cfg.text); }

/// Runs fn(i) for every case, possibly concurrently; rows come back in case order.
/// Errors carry the case label.
std::vector<std::vector<std::string>> run_cases(std::size_t count, int threads,
                                                const std::function<std::vector<std::vector<std::string>>(std::size_t)>& fn,
                                                const std::function<std::string(std::size_t)>& label) {
    std::vector<std::vector<std::vector<std::string>>> out(count);
    std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic) num_threads(threads > 0 ? threads : 1) if (threads > 1)
    for (std::size_t i = 0; i < count; ++i) {
        try {
            out[i] = fn(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < count; ++i) {
        if (errors[i]) {
            try {
                std::rethrow_exception(errors[i]);
            } catch (const Error& e) {
                throw Error(e.kind(), "case " + label(i) + ": " + e.what());
            } catch (const std::exception& e) {
                throw Error(ErrorKind::numerical, "case " + label(i) + ": " + e.what());
            }
        }
        for (auto& r : out[i]) rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<CorpusFunction> corpus_of(const ExperimentConfig& cfg, int dim) {
    if (cfg.corpus.empty()) return standard_corpus(dim);
    std::vector<CorpusFunction> out;
    for (const auto& c : cfg.corpus) out.push_back(corpus_function(c.name, dim, c.seed));
    return out;
}

std::vector<int> resolutions_or(const ExperimentConfig& cfg, std::vector<int> fallback) {
    return cfg.resolutions.empty() ? fallback : cfg.resolutions;
}

DomainShape domain_of(const json& j, int dim) {
    if (j.contains("domain")) return domain_from_json(j["domain"].dump());
    const double lo = -3.0, hi = 4.0;
    const BoundingBox bb{{lo, dim > 1 ? lo : 0.0, dim > 2 ? lo : 0.0}, {hi, dim > 1 ? hi : 0.0, dim > 2 ? hi : 0.0}, dim};
    return DomainShape::rectangle({0, 0, 0}, {1, dim > 1 ? 1.0 : 0.0, dim > 2 ? 1.0 : 0.0}, dim, bb);
}

void extents(const DomainShape& d, Point& lo, Point& hi) {
    if (d.kind() == DomainKind::rectangle) {
        lo = d.rect_lo();
        hi = d.rect_hi();
        return;
    }
    require(d.kind() == DomainKind::polygon, ErrorKind::config, "extension runs need a rectangle or polygon domain");
    lo = hi = d.vertices().front();
    for (const Point& v : d.vertices()) {
        for (int a = 0; a < 2; ++a) {
            lo[a] = std::min(lo[a], v[a]);
            hi[a] = std::max(hi[a], v[a]);
        }
    }
}

/// Grid of spacing 1/m over the domain's extent padded by `pad`, aligned with its lower corner.
CloudPtr padded_grid(const DomainShape& d, int m, double pad) {
    Point lo, hi;
    extents(d, lo, hi);
    const double h = 1.0 / m;
    const int k = static_cast<int>(std::ceil(pad * m - 1e-9));
    std::array<int, 3> shape{1, 1, 1};
    Point origin{};
    for (int a = 0; a < d.dim(); ++a) {
        shape[a] = static_cast<int>(std::lround((hi[a] - lo[a]) / h)) + 1 + 2 * k;
        origin[a] = lo[a] - k * h;
    }
    return std::make_shared<const MetricCloud>(MetricCloud::grid(origin, h, shape, d.dim()));
}

LadderSpec ladder_of(const ExperimentConfig& cfg) {
    LadderSpec l;
    l.per_octave = cfg.per_octave;
    return l;
}

Table make_table(const ExperimentConfig& cfg, std::string kind, std::vector<std::string> columns) {
    Table t;
    t.kind = std::move(kind);
    t.columns = std::move(columns);
    t.columns.push_back("config_hash");
    t.columns.push_back("version");
    t.config_hash = cfg.hash();
    return t;
}

void stamp(Table& t, std::vector<std::vector<std::string>> rows) {
    for (auto& r : rows) {
        r.push_back(t.config_hash);
        r.push_back(kVersion);
        t.rows.push_back(std::move(r));
    }
}

}  // namespace

// --- Config ------------------------------------------------------------------

std::string ExperimentConfig::hash() const {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

ExperimentConfig parse_config(const std::string& json_text, const std::string& experiment) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(ErrorKind::config, std::string("config is not valid JSON: ") + e.what());
    }
    require(j.is_object(), ErrorKind::config, "config must be a JSON object");
    if (!j.contains("experiment") && !experiment.empty()) j["experiment"] = experiment;
    ExperimentConfig c;
    c.experiment = get_or<std::string>(j, "experiment", "");
    require(!c.experiment.empty(), ErrorKind::config, "config names no experiment");
    if (!experiment.empty() && c.experiment != experiment) {
        fail(ErrorKind::config, "config is for '" + c.experiment + "', not '" + experiment + "'");
    }
    c.dim = get_or<int>(j, "dim", 1);
    require(c.dim >= 1 && c.dim <= 3, ErrorKind::config, "dim must be 1..3");
    c.p = get_or<double>(j, "p", 1.0);
    require(c.p > 0.0 && c.p <= 1.0, ErrorKind::config, "p must lie in (0, 1]");
    c.resolutions = get_or<std::vector<int>>(j, "resolutions", {});
    for (std::size_t k = 0; k < c.resolutions.size(); ++k) {
        require(c.resolutions[k] >= 2, ErrorKind::config, "resolutions must be at least 2");
        require(k == 0 || c.resolutions[k] > c.resolutions[k - 1], ErrorKind::config, "resolutions must increase strictly");
    }
    c.seed = get_or<std::uint64_t>(j, "seed", 1);
    if (j.contains("ladder")) c.per_octave = get_or<int>(j["ladder"], "per_octave", 1);
    require(c.per_octave >= 1, ErrorKind::config, "ladder.per_octave must be positive");
    if (j.contains("lp")) {
        c.lp.tol = get_or<double>(j["lp"], "tol", c.lp.tol);
        c.lp.exact_limit = get_or<std::size_t>(j["lp"], "exact_limit", c.lp.exact_limit);
        c.lp.force_exact = get_or<bool>(j["lp"], "force_exact", false);
    }
    if (j.contains("corpus")) {
        require(j["corpus"].is_array(), ErrorKind::config, "corpus must be a list");
        for (const auto& e : j["corpus"]) {
            CorpusSpec s;
            if (e.is_string()) {
                s.name = e.get<std::string>();
            } else {
                require(e.is_object() && e.contains("name"), ErrorKind::config, "corpus entries need a name");
                s.name = get_or<std::string>(e, "name", "");
                s.seed = get_or<std::uint64_t>(e, "seed", c.seed);
            }
            corpus_function(s.name, c.dim, s.seed);  // rejects unknown names
            c.corpus.push_back(s);
        }
    }
    c.text = j.dump();
    return c;
}

ExperimentConfig load_config(const std::string& path, const std::string& experiment) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::config, "cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), experiment);
}

ExperimentConfig with_seed(ExperimentConfig cfg, std::uint64_t seed) {
    json j = json::parse(cfg.text);
    j["seed"] = seed;
    cfg.seed = seed;
    cfg.text = j.dump();
    return cfg;
}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (columns[k] == name) return k;
    }
    fail(ErrorKind::parameter, "no column " + name);
}

double Table::number(std::size_t row, const std::string& name) const {
    const std::string& s = rows.at(row).at(column(name));
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    return std::stod(s);
}

// --- Runs --------------------------------------------------------------------

Table run_equivalence(const ExperimentConfig& cfg, const RunOptions& run) {
    Table t = make_table(cfg, "equivalence",
                         {"function", "dim", "resolution", "p", "canonical", "minimal", "minimal_kind", "ratio",
                          "degenerate", "smooth_proxy", "certified", "gap"});
    t.x_axis = "resolution";
    t.y_axis = "ratio";
    t.series = "function";
    const auto corpus = corpus_of(cfg, cfg.dim);
    const auto res = resolutions_or(cfg, cfg.dim == 1 ? std::vector<int>{32, 64} : std::vector<int>{8, 12});
    const std::size_t cases = corpus.size() * res.size();
    auto rows = run_cases(
        cases, run.threads,
        [&](std::size_t k) -> std::vector<std::vector<std::string>> {
            const CorpusFunction& fn = corpus[k / res.size()];
            const int n = res[k % res.size()];
            auto cloud = std::make_shared<const MetricCloud>(MetricCloud::unit_grid(n, cfg.dim));
            const SampledField f = SampledField::from_function(cloud, fn.fn);
            CanonicalOptions co;
            co.ladder = ladder_of(cfg);
            const GradientCandidate can = canonical_gradient(f, co);
            const double canonical = lp_quasinorm(can.g, cfg.p);

            const MinimalGradientLP lp = make_min_gradient_lp(f, build_constraints(f));
            double minimal = 0.0, gap = 0.0;
            bool certified = true;
            std::string kind;
            if (cfg.p == 1.0) {
                const LPSolution s = solve_min_gradient_p1(lp, cfg.lp);
                require(s.certified, ErrorKind::numerical,
                        "LP not certified (relative gap " + fmt(s.relative_gap) + ")");
                minimal = s.primal_objective;
                gap = s.gap;
                certified = s.certified;
                kind = s.exact ? "simplex_exact" : "simplex";
            } else {
                const bool tiny = lp.size() <= 8;
                const QuasiResult q = min_gradient_quasinorm_p_lt_1(lp, cfg.p, tiny ? QuasiMode::vertex_oracle : QuasiMode::irls, cfg.lp);
                minimal = std::pow(q.value, 1.0 / cfg.p);
                certified = !q.upper_bound;
                kind = tiny ? "vertex_oracle" : "irls_bound";
            }
            const bool degenerate = minimal <= 1e-12 * std::max(1.0, canonical);
            const double ratio = degenerate ? std::numeric_limits<double>::quiet_NaN() : canonical / minimal;

            const double diam = cloud->diameter();
            const TestFamily fam = TestFamily::dyadic(cfg.dim, 2.0 * cloud->resolution(), diam);
            double proxy = 0.0;
            for (const auto& d : finite_difference_gradient(f)) proxy += lp_quasinorm(smooth_maximal(d, fam, diam), cfg.p);
            return {{fn.name, fmt(cfg.dim), fmt(n), fmt(cfg.p), fmt(canonical), fmt(minimal), kind, fmt(ratio),
                     fmt(degenerate), fmt(proxy), fmt(certified), fmt(gap)}};
        },
        [&](std::size_t k) { return corpus[k / res.size()].name + " n=" + std::to_string(res[k % res.size()]); });
    stamp(t, std::move(rows));
    return t;
}

Table run_extension(const ExperimentConfig& cfg, const RunOptions& run) {
    const json j = doc(cfg);
    Table t = make_table(cfg, "extension",
                         {"function", "resolution", "eps0", "ratio", "numerator", "denominator", "degenerate",
                          "mean_value_constant", "plan_balls", "reflected_overlap", "status"});
    t.x_axis = "resolution";
    t.y_axis = "ratio";
    t.series = "function";
    const int dim = j.contains("domain") ? domain_from_json(j["domain"].dump()).dim() : std::max(cfg.dim, 2);
    const DomainShape domain = domain_of(j, dim);
    const double eps0 = get_or<double>(j, "eps0", 0.25);
    const double uniformity = get_or<double>(j, "uniformity", 2.0);
    const double pad = get_or<double>(j, "pad", 0.125);
    const double radius_factor = get_or<double>(j, "min_radius_factor", 0.75);
    const auto corpus = corpus_of(cfg, dim);
    const auto res = resolutions_or(cfg, {12, 24});

    for (int m : res) {
        auto cloud = padded_grid(domain, m, pad);
        ExtensionPlanOptions po;
        po.min_radius = radius_factor * cloud->resolution();
        std::optional<ExtensionPlan> built;
        std::string failure;
        try {
            built.emplace(build_extension_plan(domain, eps0, uniformity, po));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::construction && e.kind() != ErrorKind::resolution) throw;
            failure = e.what();
        }
        if (!failure.empty()) {
            ++t.construction_failures;
            std::vector<std::vector<std::string>> rows;
            for (const auto& fn : corpus) {
                rows.push_back({fn.name, fmt(m), fmt(eps0), "nan", "nan", "nan", "false", "nan", "0", "0",
                                "plan_failed: " + failure});
            }
            stamp(t, std::move(rows));
            continue;
        }
        const ExtensionPlan& plan = *built;
        const auto mask = closure_mask(*cloud, domain);
        QualityOptions qo;
        qo.p = cfg.p;
        qo.lp = cfg.lp;
        auto rows = run_cases(
            corpus.size(), run.threads,
            [&](std::size_t k) -> std::vector<std::vector<std::string>> {
                std::vector<double> v(cloud->size(), 0.0);
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (mask[i]) v[i] = corpus[k].fn(cloud->point(i));
                }
                const SampledField f(cloud, v, mask);
                const QualityReport q = extension_quality(f, extend(f, plan), plan, qo);
                return {{corpus[k].name, fmt(m), fmt(eps0), fmt(q.ratio), fmt(q.numerator), fmt(q.denominator),
                         fmt(q.degenerate), fmt(q.mean_value_constant), fmt(plan.reflected.size()),
                         fmt(plan.reflected_overlap), "ok"}};
            },
            [&](std::size_t k) { return corpus[k].name + " m=" + std::to_string(m); });
        stamp(t, std::move(rows));
    }
    return t;
}

Table run_hardy(const ExperimentConfig& cfg, const RunOptions& run) {
    const json j = doc(cfg);
    Table t = make_table(cfg, "hardy", {"section", "case", "parameter", "metric", "value"});
    t.x_axis = "parameter";
    t.y_axis = "value";
    t.series = "case";
    const int dim = j.contains("domain") ? domain_from_json(j["domain"].dump()).dim() : (j.contains("dim") ? cfg.dim : 2);
    const BoundingBox bb{{-1, dim > 1 ? -1.0 : 0.0, dim > 2 ? -1.0 : 0.0}, {2, dim > 1 ? 2.0 : 0.0, dim > 2 ? 2.0 : 0.0}, dim};
    const DomainShape domain = j.contains("domain")
                                   ? domain_from_json(j["domain"].dump())
                                   : DomainShape::rectangle({0, 0, 0}, {1, dim > 1 ? 1.0 : 0.0, dim > 2 ? 1.0 : 0.0}, dim, bb);
    const auto count = get_or<std::size_t>(j, "compact_count", 20);
    const std::string gradient = get_or<std::string>(j, "gradient", "canonical");
    require(gradient == "canonical" || gradient == "lp", ErrorKind::config, "gradient must be canonical or lp");
    const auto corpus = compact_corpus(dim, count, cfg.seed);
    const auto res = resolutions_or(cfg, {33, 65});

    auto quotient_rows = run_cases(
        corpus.size() * res.size(), run.threads,
        [&](std::size_t k) -> std::vector<std::vector<std::string>> {
            const CorpusFunction& fn = corpus[k / res.size()];
            const int n = res[k % res.size()];
            auto cloud = std::make_shared<const MetricCloud>(MetricCloud::unit_grid(n, dim));
            const SampledField u = SampledField::from_function(cloud, fn.fn);
            const SampledField g = gradient == "lp" ? lp_minimal_gradient(u, cfg.p, cfg.lp).g : canonical_gradient(u).g;
            const HardyQuotient q = hardy_quotient_ratio(u, g, domain, cfg.p);
            return {{"quotient", fn.name, fmt(n), "ratio", fmt(q.ratio)},
                    {"quotient", fn.name, fmt(n), "numerator", fmt(q.numerator)},
                    {"quotient", fn.name, fmt(n), "denominator", fmt(q.denominator)}};
        },
        [&](std::size_t k) { return corpus[k / res.size()].name + " n=" + std::to_string(res[k % res.size()]); });
    stamp(t, std::move(quotient_rows));

    if (dim >= 2 && get_or<bool>(j, "fatness", true)) {
        std::vector<Point> samples{{0, 0, 0}, {0.5, 0, 0}, {1, 0.5, 0}};
        if (j.contains("fatness_samples")) {
            samples.clear();
            for (const auto& p : j["fatness_samples"]) samples.push_back({p.at(0).get<double>(), p.at(1).get<double>(), 0});
        }
        const auto radii = get_or<std::vector<double>>(j, "fatness_radii", {0.1, 0.2});
        FatnessOptions fo;
        fo.lp = cfg.lp;
        const FatnessReport fr = fatness_probe(domain, cfg.p, samples, radii, fo);
        std::vector<std::vector<std::string>> rows;
        for (const auto& s : fr.samples) {
            const std::string label = "(" + fmt(s.x[0]) + " " + fmt(s.x[1]) + ")";
            rows.push_back({"fatness", label, fmt(s.r), "capacity_ratio", fmt(s.capacity_ratio)});
            rows.push_back({"fatness", label, fmt(s.r), "content_lower", fmt(s.content_lower)});
            rows.push_back({"fatness", label, fmt(s.r), "content_upper", fmt(s.content_upper)});
        }
        rows.push_back({"fatness", "all", "inf", "min_capacity_ratio", fmt(fr.min_capacity_ratio)});
        stamp(t, std::move(rows));
    }

    std::vector<std::vector<std::string>> rows;
    for (double e : get_or<std::vector<double>>(j, "h_min_exponents", {4, 8, 16})) {
        const CounterexampleReport r = counterexample_4_1(std::exp(-e), get_or<double>(j, "delta", 1.0 / 64.0));
        rows.push_back({"counterexample", "log", fmt(r.h_min), "hardy_sum", fmt(r.hardy_sum)});
        rows.push_back({"counterexample", "log", fmt(r.h_min), "derivative_l1", fmt(r.derivative_l1)});
    }
    stamp(t, std::move(rows));
    return t;
}

Table run_capacity(const ExperimentConfig& cfg, const RunOptions& run) {
    const json j = doc(cfg);
    Table t = make_table(cfg, "capacity",
                         {"resolution", "dilation", "e_radius", "u_radius", "separation", "lp_value", "witness",
                          "lp_certified", "lp_le_witness"});
    t.x_axis = "dilation";
    t.y_axis = "lp_value";
    t.series = "resolution";
    const int dim = cfg.dim;
    const double re = get_or<double>(j, "e_radius", 0.15);
    const double ru = get_or<double>(j, "u_radius", 0.4);
    require(re > 0.0 && ru > re, ErrorKind::config, "need 0 < e_radius < u_radius");
    const auto dilations = get_or<std::vector<double>>(j, "dilations", {1.0, 2.0});
    const auto res = resolutions_or(cfg, dim == 1 ? std::vector<int>{21, 41} : std::vector<int>{7, 9});
    CapacityOptions co;
    co.lp = cfg.lp;
    co.max_distance = get_or<double>(j, "max_distance", 0.0);
    auto rows = run_cases(
        res.size() * dilations.size(), run.threads,
        [&](std::size_t k) -> std::vector<std::vector<std::string>> {
            const int n = res[k / dilations.size()];
            const double lambda = dilations[k % dilations.size()];
            const MetricCloud base = MetricCloud::unit_grid(n, dim);
            const Point c{0.5, dim > 1 ? 0.5 : 0.0, dim > 2 ? 0.5 : 0.0};
            std::vector<std::uint8_t> in_e(base.size()), in_u(base.size());
            for (std::size_t i = 0; i < base.size(); ++i) {
                const double d = dist(base.point(i), c);
                in_e[i] = d <= re * (1.0 + 1e-12) ? 1 : 0;
                in_u[i] = d < ru ? 1 : 0;
            }
            auto cloud = std::make_shared<const MetricCloud>(base.dilated(lambda));
            CapacityOptions o = co;
            o.max_distance *= lambda;
            const CapacityEstimate e = hardy_capacity(cloud, in_e, in_u, cfg.p, o);
            return {{fmt(n), fmt(lambda), fmt(re), fmt(ru), fmt(e.separation), fmt(e.lp_value), fmt(e.upper),
                     fmt(e.lp_certified), fmt(cfg.p < 1.0 || e.lp_value <= e.upper * (1.0 + 1e-9))}};
        },
        [&](std::size_t k) { return "n=" + std::to_string(res[k / dilations.size()]); });
    stamp(t, std::move(rows));
    return t;
}

Table run_content(const ExperimentConfig& cfg, const RunOptions& run) {
    const json j = doc(cfg);
    Table t = make_table(cfg, "content", {"set", "points", "s", "finest", "lower", "upper", "cover_kind", "balls"});
    t.x_axis = "finest";
    t.y_axis = "upper";
    t.series = "set";
    const json set = j.contains("set") ? j["set"] : json{{"kind", "segment"}};
    const std::string kind = get_or<std::string>(set, "kind", "segment");
    std::vector<Point> e;
    if (kind == "segment") {
        e = segment_samples({0, 0, 0}, {1, 0, 0}, get_or<double>(set, "spacing", 1.0 / 256.0));
    } else if (kind == "square_boundary") {
        e = square_boundary_samples({0, 0, 0}, 1.0, get_or<double>(set, "spacing", 1.0 / 64.0));
    } else if (kind == "cantor") {
        e = cantor_samples(get_or<int>(set, "levels", 6), get_or<int>(set, "pieces", 3), get_or<int>(set, "keep", 2), cfg.seed);
    } else if (kind == "csv") {
        e = read_points_csv(get_or<std::string>(set, "path", ""));
    } else {
        fail(ErrorKind::config, "unknown content set '" + kind + "'");
    }
    const auto exponents = get_or<std::vector<double>>(j, "s", {1.0});
    const auto finest = get_or<std::vector<double>>(j, "finest", {0.0});
    auto rows = run_cases(
        exponents.size() * finest.size(), run.threads,
        [&](std::size_t k) -> std::vector<std::vector<std::string>> {
            ContentOptions o;
            o.finest = finest[k % finest.size()];
            const ContentEstimate c = hausdorff_content(e, exponents[k / finest.size()], o);
            return {{kind, fmt(c.points), fmt(c.s), fmt(c.finest), fmt(c.lower), fmt(c.upper), c.cover_kind,
                     fmt(c.cover.size())}};
        },
        [&](std::size_t k) { return kind + " s=" + fmt(exponents[k / finest.size()]); });
    stamp(t, std::move(rows));
    return t;
}

Table run_decompose(const ExperimentConfig& cfg, const RunOptions& run) {
    const json j = doc(cfg);
    Table t = make_table(cfg, "decompose", {"case", "dim", "resolution", "max_error", "support_inside"});
    t.x_axis = "case";
    t.y_axis = "max_error";
    t.series = "resolution";
    const auto count = get_or<std::size_t>(j, "count", 100);
    const auto res = resolutions_or(cfg, {8});
    auto rows = run_cases(
        count * res.size(), run.threads,
        [&](std::size_t k) -> std::vector<std::vector<std::string>> {
            const int n = res[k % res.size()];
            const SampledField phi = random_mean_zero_field(n, cfg.dim, cfg.seed + k);
            const DecompositionCheck c = check_decomposition(phi);
            return {{fmt(k / res.size()), fmt(cfg.dim), fmt(n), fmt(c.max_error), fmt(c.support_inside)}};
        },
        [&](std::size_t k) { return "field " + std::to_string(k); });
    stamp(t, std::move(rows));
    return t;
}

Table run_counterexample(const ExperimentConfig& cfg, const RunOptions&) {
    const json j = doc(cfg);
    Table t = make_table(cfg, "counterexample",
                         {"h_min", "log_inverse", "cells", "derivative_l1", "derivative_l1_exact", "hardy_sum",
                          "hardy_integral", "u_top"});
    t.x_axis = "log_inverse";
    t.y_axis = "hardy_sum";
    const double delta = get_or<double>(j, "delta", 1.0 / 64.0);
    std::vector<std::vector<std::string>> rows;
    for (double e : get_or<std::vector<double>>(j, "h_min_exponents", {4, 8, 16})) {
        const CounterexampleReport r = counterexample_4_1(std::exp(-e), delta);
        rows.push_back({fmt(r.h_min), fmt(e), fmt(r.cells), fmt(r.derivative_l1), fmt(r.derivative_l1_exact),
                        fmt(r.hardy_sum), fmt(r.hardy_integral), fmt(r.u_top)});
    }
    stamp(t, std::move(rows));
    return t;
}

Table run_experiment(const ExperimentConfig& cfg, const RunOptions& run) {
    const std::string& e = cfg.experiment;
    if (e == "equivalence") return run_equivalence(cfg, run);
    if (e == "extension") return run_extension(cfg, run);
    if (e == "hardy") return run_hardy(cfg, run);
    if (e == "capacity") return run_capacity(cfg, run);
    if (e == "content") return run_content(cfg, run);
    if (e == "decompose") return run_decompose(cfg, run);
    if (e == "counterexample") return run_counterexample(cfg, run);
    fail(ErrorKind::config, "unknown experiment '" + e + "'");
}

// --- Output ------------------------------------------------------------------

namespace {

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

EmitResult emit_plot_data(const Table& table, const std::string& dir, const std::string& kind) {
    namespace fs = std::filesystem;
    const std::string name = kind.empty() ? table.kind : kind;
    require(!name.empty(), ErrorKind::parameter, "table has no kind");
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(!ec, ErrorKind::io, "cannot create " + dir + ": " + ec.message());
    EmitResult r;
    r.csv_path = (fs::path(dir) / (name + ".csv")).string();
    r.manifest_path = (fs::path(dir) / (name + ".manifest.json")).string();

    if (fs::exists(r.manifest_path)) {
        std::ifstream in(r.manifest_path);
        try {
            const json old = json::parse(in);
            r.version = old.value("version", 0) + 1;
        } catch (const json::exception&) {
            r.version = 1;
        }
    }

    std::ofstream csv(r.csv_path, std::ios::trunc);
    require(csv.good(), ErrorKind::io, "cannot write " + r.csv_path);
    for (std::size_t k = 0; k < table.columns.size(); ++k) csv << (k ? "," : "") << csv_cell(table.columns[k]);
    csv << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) csv << (k ? "," : "") << csv_cell(row[k]);
        csv << '\n';
    }
    csv.close();
    require(!csv.fail(), ErrorKind::io, "write failed for " + r.csv_path);

    json m;
    m["kind"] = name;
    m["version"] = r.version;
    m["csv"] = fs::path(r.csv_path).filename().string();
    m["columns"] = table.columns;
    m["rows"] = table.rows.size();
    m["axes"] = {{"x", table.x_axis}, {"y", table.y_axis}, {"series", table.series}};
    m["config_hash"] = table.config_hash;
    m["software"] = kVersion;
    m["construction_failures"] = table.construction_failures;
    std::ofstream out(r.manifest_path, std::ios::trunc);
    require(out.good(), ErrorKind::io, "cannot write " + r.manifest_path);
    out << m.dump(2) << '\n';
    out.close();
    require(!out.fail(), ErrorKind::io, "write failed for " + r.manifest_path);
    return r;
}

// --- Decomposition -----------------------------------------------------------

DecompositionCheck check_decomposition(const SampledField& phi) {
    const auto psi = mean_zero_decompose(phi);
    const SampledField back = forward_divergence(psi);
    DecompositionCheck c;
    for (std::size_t i = 0; i < phi.size(); ++i) c.max_error = std::max(c.max_error, std::abs(back.values[i] - phi.values[i]));
    const MetricCloud& cloud = *phi.cloud;
    const auto& shape = cloud.grid_spec().shape;
    for (const auto& p : psi) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            const auto id = cloud.multi_index(i);
            bool outer = false;
            for (int a = 0; a < cloud.dim(); ++a) outer = outer || id[a] == 0 || id[a] == shape[a] - 1;
            if (outer && p.values[i] != 0.0) c.support_inside = false;
        }
    }
    return c;
}

SampledField random_mean_zero_field(int n, int dim, std::uint64_t seed) {
    require(n >= 3, ErrorKind::parameter, "need at least 3 points per axis");
    auto cloud = std::make_shared<const MetricCloud>(MetricCloud::unit_grid(n, dim));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(cloud->size(), 0.0);
    std::vector<std::size_t> inner;
    double mean = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto id = cloud->multi_index(i);
        bool interior = true;
        for (int a = 0; a < dim; ++a) interior = interior && id[a] > 0 && id[a] < n - 1;
        if (!interior) continue;
        v[i] = u(rng);
        mean += v[i];
        inner.push_back(i);
    }
    mean /= static_cast<double>(inner.size());
    for (std::size_t i : inner) v[i] -= mean;
    return SampledField(cloud, std::move(v));
}

}  // namespace hsob
