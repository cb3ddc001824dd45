#include "hsob/corpus.hpp"

#include <numbers>
#include <random>

namespace hsob {

namespace {

double centered_norm(const Point& x, int dim, double c) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += (x[a] - c) * (x[a] - c);
    return std::sqrt(s);
}

std::function<double(const Point&)> random_smooth(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::uniform_int_distribution<int> freq(1, 3);
    std::normal_distribution<double> amp(0.0, 1.0);
    struct Mode {
        double a;
        std::array<int, 3> k;
        double phi;
    };
    std::vector<Mode> modes;
    for (int m = 0; m < 4; ++m) {
        Mode md{};
        md.k = {0, 0, 0};
        for (int a = 0; a < dim; ++a) md.k[a] = freq(rng);
        md.phi = phase(rng);
        md.a = amp(rng) / (1.0 + m);
        modes.push_back(md);
    }
    return [modes, dim](const Point& x) {
        double s = 0.0;
        for (const auto& md : modes) {
            double arg = md.phi;
            for (int a = 0; a < dim; ++a) arg += std::numbers::pi * md.k[a] * x[a];
            s += md.a * std::sin(arg);
        }
        return s;
    };
}

}  // namespace

const std::vector<std::string>& corpus_names() {
    static const std::vector<std::string> names{
        "const",    "affine",      "quadratic", "cubic",    "bump",      "step",          "abs_kink",
        "distance", "log_example", "sine_low",  "sine_high", "random_smooth",
    };
    return names;
}

CorpusFunction corpus_function(const std::string& name, int dim, std::uint64_t seed) {
    require(dim >= 1 && dim <= 3, ErrorKind::parameter, "corpus dimension must be 1..3");
    CorpusFunction f;
    f.name = name;
    if (name == "const") {
        f.fn = [](const Point&) { return 1.0; };
    } else if (name == "affine") {
        f.fn = [](const Point& x) { return 1.0 * x[0] + 0.5 * x[1] + 0.25 * x[2] + 0.1; };
    } else if (name == "quadratic") {
        f.fn = [dim](const Point& x) { const double r = centered_norm(x, dim, 0.5); return r * r; };
    } else if (name == "cubic") {
        f.fn = [dim](const Point& x) {
            double s = 0.0;
            for (int a = 0; a < dim; ++a) s += std::pow(x[a] - 0.3, 3);
            return s;
        };
    } else if (name == "bump") {
        f.fn = [dim](const Point& x) { return bump(centered_norm(x, dim, 0.5) / 0.35); };
    } else if (name == "step") {
        f.fn = [](const Point& x) { return x[0] > 0.5 ? 1.0 : 0.0; };
    } else if (name == "abs_kink") {
        f.fn = [](const Point& x) { return std::abs(x[0] - 0.4) + 0.5 * std::abs(x[1] - 0.6); };
    } else if (name == "distance") {
        f.fn = [dim](const Point& x) {
            double d = 1.0;
            for (int a = 0; a < dim; ++a) d = std::min({d, x[a], 1.0 - x[a]});
            return d;
        };
    } else if (name == "log_example") {
        f.fn = [dim](const Point& x) {
            const double r = std::max(centered_norm(x, dim, 0.5), 1e-6);
            return 1.0 / (1.0 + std::log(1.0 / r));
        };
    } else if (name == "sine_low") {
        f.fn = [dim](const Point& x) {
            return std::sin(2.0 * std::numbers::pi * x[0]) * (dim > 1 ? std::cos(std::numbers::pi * x[1]) : 1.0);
        };
    } else if (name == "sine_high") {
        f.fn = [dim](const Point& x) {
            return std::sin(8.0 * std::numbers::pi * x[0]) * (dim > 1 ? std::sin(6.0 * std::numbers::pi * x[1]) : 1.0);
        };
    } else if (name == "random_smooth") {
        f.fn = random_smooth(dim, seed);
        f.name = name + "_" + std::to_string(seed);
    } else {
        fail(ErrorKind::config, "unknown corpus function " + name);
    }
    return f;
}

std::vector<CorpusFunction> standard_corpus(int dim) {
    std::vector<CorpusFunction> out;
    for (const char* n : {"affine", "quadratic", "cubic", "bump", "step", "abs_kink", "distance", "log_example",
                          "sine_low", "sine_high"}) {
        out.push_back(corpus_function(n, dim));
    }
    out.push_back(corpus_function("random_smooth", dim, 1));
    out.push_back(corpus_function("random_smooth", dim, 2));
    return out;
}

std::vector<CorpusFunction> compact_corpus(int dim, std::size_t count, std::uint64_t seed) {
    std::vector<CorpusFunction> out;
    for (auto& f : standard_corpus(dim)) {
        if (out.size() == count) return out;
        auto base = f.fn;
        out.push_back({f.name + "_cut", [base, dim](const Point& x) {
                           return base(x) * bump(centered_norm(x, dim, 0.5) / 0.45);
                       }});
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> center(0.3, 0.7);
    std::uniform_real_distribution<double> radius(0.1, 0.25);
    while (out.size() < count) {
        Point c{};
        for (int a = 0; a < dim; ++a) c[a] = center(rng);
        const double r = radius(rng);
        out.push_back({"offset_bump_" + std::to_string(out.size()), [c, r](const Point& x) {
                           return bump(dist(x, c) / r);
                       }});
    }
    return out;
}

}  // namespace hsob
