#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hsob/common.hpp"

namespace hsob {

/// A named test function on [0, 1]^n.
struct CorpusFunction {
    std::string name;
    std::function<double(const Point&)> fn;
};

/// Names accepted by `corpus_function`.
const std::vector<std::string>& corpus_names();

/// Generator by name. `random_smooth` takes a seed; `dim` is 1..3.
CorpusFunction corpus_function(const std::string& name, int dim, std::uint64_t seed = 1);

/// The 12-function corpus: affine, quadratic, cubic, bump, step, abs_kink,
/// distance, log_example, sine_low, sine_high, random_smooth (seeds 1 and 2).
std::vector<CorpusFunction> standard_corpus(int dim);

/// `count` functions compactly supported in the open unit cube: the standard
/// corpus multiplied by a centered bump cutoff, then seeded off-center bumps.
std::vector<CorpusFunction> compact_corpus(int dim, std::size_t count, std::uint64_t seed = 7);

}  // namespace hsob
