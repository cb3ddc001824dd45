// Recomputes the canonical-gradient multiplier over the calibration corpus.
#include <cstdio>
#include <memory>

#include "hsob/corpus.hpp"
#include "hsob/hajlasz.hpp"

using namespace hsob;

int main() {
    struct Res {
        int dim, n;
    };
    const Res grids[] = {{1, 32}, {1, 64}, {1, 128}, {2, 16}, {2, 32}};
    double worst = 0.0;
    for (const auto& gr : grids) {
        auto cloud = std::make_shared<const MetricCloud>(MetricCloud::unit_grid(gr.n, gr.dim));
        for (const auto& cf : standard_corpus(gr.dim)) {
            const SampledField f = SampledField::from_function(cloud, cf.fn);
            const ConstraintSet cs = build_constraints(f);
            const double r = calibration_ratio(cs, maximal_gradient(f));
            std::printf("%dD n=%-4d %-16s ratio %.6f\n", gr.dim, gr.n, cf.name.c_str(), r);
            worst = std::max(worst, r);
        }
    }
    std::printf("max ratio %.6f  shipped constant 2 * max = %.6f\n", worst, 2.0 * worst);
    return 0;
}
