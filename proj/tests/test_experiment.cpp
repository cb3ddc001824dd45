#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "hsob/experiment.hpp"
#include "json.hpp"

using namespace hsob;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::io;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hsob_test_" + name);
    fs::remove_all(p);
    return p;
}

int run_cli(const std::string& args) {
    const int status = std::system((std::string(HSOB_CLI) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
    const ExperimentConfig c = parse_config(R"({"experiment": "equivalence", "dim": 2, "resolutions": [8, 16],
        "corpus": ["affine", {"name": "random_smooth", "seed": 4}], "lp": {"tol": 1e-9}, "seed": 3})");
    CHECK(c.dim == 2);
    CHECK(c.resolutions == std::vector<int>{8, 16});
    REQUIRE(c.corpus.size() == 2);
    CHECK(c.corpus[1].seed == 4);
    CHECK(c.lp.tol == 1e-9);
    CHECK(c.hash().size() == 16);

    // Key order does not change the hash; the seed does.
    const ExperimentConfig d = parse_config(R"({"seed": 3, "lp": {"tol": 1e-9}, "corpus": ["affine", {"seed": 4, "name": "random_smooth"}],
        "resolutions": [8, 16], "dim": 2, "experiment": "equivalence"})");
    CHECK(d.hash() == c.hash());
    CHECK(with_seed(c, 4).hash() != c.hash());
    CHECK(with_seed(c, 4).seed == 4);

    CHECK(kind_of("{") == ErrorKind::config);
    CHECK(kind_of(R"({"experiment": "equivalence", "resolutions": [16, 16]})") == ErrorKind::config);
    CHECK(kind_of(R"({"experiment": "equivalence", "corpus": ["nope"]})") == ErrorKind::config);
    CHECK(kind_of(R"({"experiment": "equivalence", "p": 2})") == ErrorKind::config);
    CHECK(kind_of(R"({"resolutions": [4]})") == ErrorKind::config);
    CHECK(kind_of(R"({"experiment": "equivalence", "dim": "two"})") == ErrorKind::config);
    CHECK_THROWS_AS(parse_config(R"({"experiment": "hardy"})", "extension"), Error);
}

TEST_CASE("equivalence run") {
    const Table k = run_equivalence(parse_config(R"({"experiment": "equivalence", "corpus": ["const"], "resolutions": [16]})"));
    REQUIRE(k.rows.size() == 1);
    CHECK(k.rows[0][k.column("degenerate")] == "true");
    CHECK(k.number(0, "canonical") == 0.0);
    CHECK(k.number(0, "minimal") == 0.0);

    // Affine in 1D: g = |slope| / 2 everywhere is optimal, so the LP value is measure * |slope| / 2.
    const Table a = run_equivalence(parse_config(R"({"experiment": "equivalence", "corpus": ["affine"], "resolutions": [3, 9, 33]})"));
    const int ns[] = {3, 9, 33};
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        const double h = 1.0 / (ns[r] - 1);
        CHECK(a.number(r, "minimal") == doctest::Approx(ns[r] * h * 0.5).epsilon(1e-9));
        CHECK(a.number(r, "ratio") >= 1.0);
        CHECK(a.rows[r][a.column("certified")] == "true");
    }

    const ExperimentConfig cfg = parse_config(R"({"experiment": "equivalence", "resolutions": [16]})");
    const Table t = run_equivalence(cfg);
    CHECK(t.rows.size() == 12);
    double lo = 1e300, hi = 0.0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        lo = std::min(lo, t.number(r, "ratio"));
        hi = std::max(hi, t.number(r, "ratio"));
    }
    MESSAGE("ratio spread " << hi / lo);
    CHECK(hi / lo <= 10.0);

    // Bit-identical reruns, also with concurrent cases.
    RunOptions two;
    two.threads = 2;
    CHECK(run_equivalence(cfg).rows == t.rows);
    CHECK(run_equivalence(cfg, two).rows == t.rows);

    const Table q = run_equivalence(parse_config(R"({"experiment": "equivalence", "corpus": ["quadratic"], "resolutions": [4, 16], "p": 0.8})"));
    CHECK(q.rows[0][q.column("minimal_kind")] == "vertex_oracle");
    CHECK(q.rows[1][q.column("minimal_kind")] == "irls_bound");
}

TEST_CASE("counterexample, content, capacity and decompose runs") {
    const Table c = run_counterexample(parse_config(R"({"experiment": "counterexample", "h_min_exponents": [3, 6, 12, 24]})"));
    REQUIRE(c.rows.size() == 4);
    for (std::size_t r = 0; r < 4; ++r) {
        CHECK(c.number(r, "derivative_l1") < 1.0);
        CHECK(c.number(r, "u_top") == 1.0);
        if (r > 0) CHECK(c.number(r, "hardy_sum") > c.number(r - 1, "hardy_sum"));
    }

    const Table s = run_content(parse_config(R"({"experiment": "content", "set": {"kind": "cantor", "levels": 5}, "s": [0.5, 0.63, 1.0]})"));
    REQUIRE(s.rows.size() == 3);
    for (std::size_t r = 0; r < 3; ++r) CHECK(s.number(r, "lower") <= s.number(r, "upper"));
    CHECK_THROWS_AS(run_content(parse_config(R"({"experiment": "content", "set": {"kind": "blob"}})")), Error);

    const Table cap = run_capacity(parse_config(R"({"experiment": "capacity", "dim": 2, "resolutions": [7], "dilations": [1, 2]})"));
    REQUIRE(cap.rows.size() == 2);
    CHECK(cap.number(1, "lp_value") == doctest::Approx(2.0 * cap.number(0, "lp_value")).epsilon(1e-9));
    CHECK(cap.rows[0][cap.column("lp_le_witness")] == "true");

    const Table d = run_decompose(parse_config(R"({"experiment": "decompose", "dim": 2, "count": 5})"));
    REQUIRE(d.rows.size() == 5);
    for (std::size_t r = 0; r < 5; ++r) {
        CHECK(d.number(r, "max_error") <= 1e-12);
        CHECK(d.rows[r][d.column("support_inside")] == "true");
    }
}

TEST_CASE("extension run records plan failures") {
    // A thin spike defeats the reflected-ball search; the failure becomes rows, not an exception.
    const Table t = run_extension(parse_config(R"({"experiment": "extension", "corpus": ["affine"], "resolutions": [8], "eps0": 0.05,
        "domain": {"kind": "polygon", "vertices": [[0, 0], [1, 0], [1, 0.4995], [1.6, 0.4995], [1.6, 0.5005], [1, 0.5005], [1, 1], [0, 1]],
                   "bbox": {"lo": [-1, -1], "hi": [3, 2]}}})"));
    CHECK(t.construction_failures == 1);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][t.column("status")].rfind("plan_failed", 0) == 0);
}

TEST_CASE("plot data emission") {
    const fs::path dir = scratch("emit");
    Table empty;
    empty.kind = "equivalence";
    empty.columns = {"function", "ratio"};
    const EmitResult r1 = emit_plot_data(empty, dir.string());
    CHECK(r1.version == 1);
    std::ifstream in(r1.csv_path);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(all == "function,ratio\n");

    Table t = empty;
    t.rows.push_back({"step, shifted", "1.5"});
    t.x_axis = "resolution";
    const EmitResult r2 = emit_plot_data(t, dir.string());
    CHECK(r2.version == 2);
    std::ifstream in2(r2.csv_path);
    std::string body((std::istreambuf_iterator<char>(in2)), std::istreambuf_iterator<char>());
    CHECK(body == "function,ratio\n\"step, shifted\",1.5\n");
    std::ifstream mf(r2.manifest_path);
    const auto m = nlohmann::json::parse(mf);
    CHECK(m["version"] == 2);
    CHECK(m["rows"] == 1);
    CHECK(m["axes"]["x"] == "resolution");
    fs::remove_all(dir);
}

TEST_CASE("command line exit codes") {
    const fs::path dir = scratch("cli");
    fs::create_directories(dir);
    const std::string out = " --out " + (dir / "out").string();
    CHECK(run_cli("counterexample" + out) == 0);
    CHECK(fs::exists(dir / "out" / "counterexample.csv"));
    CHECK(run_cli("counterexample --deterministic --seed 9 --threads 1" + out) == 0);
    CHECK(run_cli("nonsense" + out) == 2);
    CHECK(run_cli("counterexample --config " + (dir / "missing.json").string() + out) == 2);

    std::ofstream(dir / "bad.json") << R"({"resolutions": [8, 4]})";
    CHECK(run_cli("equivalence --config " + (dir / "bad.json").string() + out) == 2);
    std::ofstream(dir / "spike.json") << R"({"corpus": ["affine"], "resolutions": [8], "eps0": 0.05,
        "domain": {"kind": "polygon", "vertices": [[0, 0], [1, 0], [1, 0.4995], [1.6, 0.4995], [1.6, 0.5005], [1, 0.5005], [1, 1], [0, 1]],
                   "bbox": {"lo": [-1, -1], "hi": [3, 2]}}})";
    CHECK(run_cli("extension --config " + (dir / "spike.json").string() + out) == 4);
    std::ofstream(dir / "strict.json") << R"({"corpus": ["sine_high"], "resolutions": [24], "lp": {"tol": 1e-300, "exact_limit": 0}})";
    CHECK(run_cli("equivalence --config " + (dir / "strict.json").string() + out) == 3);
    fs::remove_all(dir);
}
