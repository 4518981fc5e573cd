// Compare standard and decomposable monodromy on cyclic-n with the dihedral
// invariant alpha = x0x2 + x1x3 + ... as the intermediate map.
//
//   demo_cyclic_classes [n] [seed]

#include "monodromy/all.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    using namespace monodromy;
    const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 5;
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;
    const auto inst = cyclic_system(n, seed);

    RunConfig cfg;
    cfg.rng_seed = seed;
    cfg.stop = {200, std::nullopt, 10};
    for (const auto mode : {Mode::standard, Mode::decomposable}) {
        cfg.mode = mode;
        const auto r = solve(inst, cfg);
        std::cout << to_string(mode) << ": " << r.points.size() << " points, " << r.classes.size() << " classes, "
                  << r.stats.loops_taken << " loops, " << r.stats.paths_tracked << " paths, " << r.stats.wall_ms()
                  << " ms\n";
        if (r.degrees) std::cout << "  degrees (a, b) = (" << r.degrees->a << ", " << r.degrees->b << ")\n";
    }
}
