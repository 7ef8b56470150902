// Overlap of the collective modes addressed by the ground and first excited
// states of a 2D harmonic dot, and the orthogonal mode built from them.

#include <cmath>
#include <cstdio>

#include "collmem/collmem.hpp"

int main() {
    for (std::size_t n : {25, 50, 100, 200}) {
        const auto grids = collmem::harmonic_oscillator_grid(n, 6.0);
        const auto g = collmem::profile_from_grid(grids.g);
        const auto h = collmem::profile_from_grid(grids.h);
        const auto pair = collmem::gram_schmidt(g, h);
        std::printf("%3zu x %-3zu  s = %.12f  |s - 3^-1/2| = %.2e  <g|ghat> = %.1e\n", n, n, pair.overlap,
                    std::abs(pair.overlap - 1.0 / std::sqrt(3.0)),
                    std::abs(collmem::overlap_from_profiles(g, pair.profile_ghat)));
    }
}
