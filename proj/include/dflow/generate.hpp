#ifndef DFLOW_GENERATE_HPP
#define DFLOW_GENERATE_HPP

// Seeded random network generation.  Every topology produces a valid
// network (connected, anti-symmetric, loop-free, positive elasticities);
// the cactus and non-cactus topologies additionally guarantee their
// structural class by construction.  Output is reproducible: mt19937_64 is
// fully specified by the standard and all draws go through plain modulo
// reduction, so the same config yields the same network on every platform.

#include <cstdint>

#include "dflow/network.hpp"

namespace dflow {

enum class Topology {
    Tree,       ///< random attachment tree
    Cycle,      ///< one simple cycle through every vertex (needs >= 3)
    Cactus,     ///< pendant-or-cycle growth; passes is_cactus
    Random,     ///< attachment tree plus random chords
    NonCactus,  ///< seeded with a theta subgraph; has a diamond minor (needs >= 4)
};

enum class BoundStyle {
    Free,          ///< every flow and imbalance bound is (-inf, inf)
    Symmetric,     ///< f in [-c, c], p in [-d, d] with random positive c, d
    RandomFinite,  ///< finite [lo, hi] with lo <= hi, occasionally fixed
};

struct GeneratorConfig {
    std::uint64_t seed = 0;
    int min_vertices = 2;  ///< vertex count is drawn uniformly from this range
    int max_vertices = 8;
    Topology topology = Topology::Random;
    BoundStyle bounds = BoundStyle::Free;
    /// Numerators and denominators of generated rationals stay within this.
    long long magnitude = 4;
};

/// Builds a random network from the config.  Throws ValidationError when the
/// config is infeasible: an empty vertex range, a range below the topology's
/// minimum (3 for a cycle, 4 for a non-cactus), or magnitude < 1.
Network generate(const GeneratorConfig& config);

}  // namespace dflow

#endif  // DFLOW_GENERATE_HPP
