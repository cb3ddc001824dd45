#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsob/field.hpp"
#include "hsob/lp.hpp"

namespace hsob {

inline constexpr const char* kVersion = "hsob 1.0.0";

struct CorpusSpec {
    std::string name;
    std::uint64_t seed = 1;
};

/// Experiment definition read from JSON. Unknown keys are kept in `text` and
/// read by the individual runs (with their defaults).
struct ExperimentConfig {
    std::string experiment;
    int dim = 1;
    /// Named generators; empty selects the run's default corpus.
    std::vector<CorpusSpec> corpus;
    double p = 1.0;
    /// Points per axis, strictly increasing.
    std::vector<int> resolutions;
    int per_octave = 1;
    LPOptions lp{};
    std::uint64_t seed = 1;
    /// Canonical JSON of the whole document (keys sorted).
    std::string text;

    /// FNV-1a 64 of `text`, as 16 hex digits.
    std::string hash() const;
};

/// Malformed documents raise ErrorKind::config. `experiment` fills a missing name.
ExperimentConfig parse_config(const std::string& json_text, const std::string& experiment = "");
ExperimentConfig load_config(const std::string& path, const std::string& experiment = "");
/// Replaces the seed (and the document's "seed" key, so the hash follows).
ExperimentConfig with_seed(ExperimentConfig cfg, std::uint64_t seed);

/// One observation per row; cells are preformatted strings.
struct Table {
    std::string kind;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    /// Axis names for plotting.
    std::string x_axis, y_axis, series;
    std::string config_hash;
    /// Rows whose construction failed (recorded, not thrown).
    std::size_t construction_failures = 0;

    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
};

struct RunOptions {
    /// Cases run concurrently on this many threads (nested kernels then run serially).
    int threads = 1;
};

Table run_equivalence(const ExperimentConfig& cfg, const RunOptions& run = {});
Table run_extension(const ExperimentConfig& cfg, const RunOptions& run = {});
Table run_hardy(const ExperimentConfig& cfg, const RunOptions& run = {});
Table run_capacity(const ExperimentConfig& cfg, const RunOptions& run = {});
Table run_content(const ExperimentConfig& cfg, const RunOptions& run = {});
Table run_decompose(const ExperimentConfig& cfg, const RunOptions& run = {});
Table run_counterexample(const ExperimentConfig& cfg, const RunOptions& run = {});

/// Dispatch by cfg.experiment.
Table run_experiment(const ExperimentConfig& cfg, const RunOptions& run = {});

struct EmitResult {
    std::string csv_path;
    std::string manifest_path;
    int version = 1;
};

/// Writes <dir>/<kind>.csv and <dir>/<kind>.manifest.json. An existing
/// manifest is overwritten with its version incremented.
EmitResult emit_plot_data(const Table& table, const std::string& dir, const std::string& kind = "");

struct DecompositionCheck {
    double max_error = 0.0;      // max |sum_k Delta_k psi_k - phi|
    bool support_inside = true;  // psi_k vanishes on the outer layer of the grid
};

DecompositionCheck check_decomposition(const SampledField& phi);

/// Mean-zero random field on an n^dim grid, zero on the outer layer.
SampledField random_mean_zero_field(int n, int dim, std::uint64_t seed);

}  // namespace hsob
