// Fidelity of the pi/2 swap between the g and ghat modes as the number of
// pulse cycles grows, with and without heralding.

#include <cstdio>

#include "collmem/collmem.hpp"

int main() {
    const double overlap = 0.5;
    const auto basis = collmem::build_basis(2);
    std::printf("%4s %10s %12s %12s %10s\n", "N", "T", "1-F", "1-Fc", "p_herald");
    for (int n : {1, 2, 5, 10, 20, 50, 100}) {
        const auto r = collmem::evaluate(collmem::SequenceParams::for_rotation(overlap, n), basis);
        std::printf("%4d %10.4f %12.4e %12.4e %10.6f\n", r.cycles, r.total, 1.0 - r.fidelity,
                    1.0 - r.conditional_fidelity, r.herald);
    }
}
