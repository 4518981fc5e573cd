// Solve x^{2n} - 2x^n + t = 0 by monodromy and compare with the closed form.
//
//   demo_power_curve [n]

#include "monodromy/all.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    using namespace monodromy;
    const int n = argc > 1 ? std::atoi(argv[1]) : 5;
    const auto inst = power_curve(n);

    Rng rng(2024);
    StoppingCriterion stop{200, inst.known_degree, std::nullopt};
    const auto res = standard_monodromy(*inst.curve, inst.base(), {inst.seed_x}, stop, TrackerConfig{}, rng,
                                        inst.options());
    std::cout << inst.name << ": " << res.points.size() << " of " << *inst.known_degree << " points after "
              << res.stats.loops_taken << " loops, " << res.stats.paths_tracked << " paths\n";

    double worst = 0.0;
    for (const auto& p : res.points) {
        double best = 1e300;
        for (auto r : power_curve_roots(n, inst.base())) best = std::min(best, std::abs(p[0] - r));
        worst = std::max(worst, best);
    }
    std::cout << "largest distance to a closed-form root: " << worst << '\n';

    const auto blocks = partition_by_alpha(res.points, *inst.alpha);
    std::cout << "alpha = x^" << n << " splits the fiber into " << blocks.size() << " blocks\n";
    for (const auto& b : blocks) std::cout << "  x^n = " << inst.alpha->image(res.points[b[0]])[0] << "  size " << b.size() << '\n';
}
