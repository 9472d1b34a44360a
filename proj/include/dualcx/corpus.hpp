#pragma once

// Fixture corpus, random-complex generator and the homology-invariance fuzz
// driver. Everything here is deterministic for a fixed seed.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dualcx/blowup.hpp"
#include "dualcx/homology.hpp"
#include "dualcx/snc_config.hpp"
#include "dualcx/toric.hpp"

namespace dualcx {

/// k divisors forming a cycle of curves: for k >= 3 one intersection
/// component per adjacent pair, for k = 2 two components of the single
/// intersection (parallel edges). Homology is that of a circle.
SncConfig generate_cycle_of_curves(int k);

struct Fixture {
    enum class Kind { Snc, Fan, Pending };
    std::string name;
    Kind kind = Kind::Snc;
    std::optional<SncConfig> config;
    std::optional<dualcx::Fan> fan;
    std::optional<HomologyReport> expected;
    std::optional<int> documented_h1_rank;  // recorded target when no payload exists
    std::string note;
};

/// Known fixtures: sphere2, torus7, rp2_6, simplex_full_<n>, cycle_<k>,
/// a1_cone, a5_cone, square_cone, random_<seed>, gordon_example (a documented
/// pending slot with no payload). Unknown names raise UnsupportedError.
Fixture generate_fixture(const std::string& name);

struct RandomComplexParams {
    int num_divisors = 6;
    int max_dim = 3;
    unsigned cell_percent = 55;    // chance to keep a candidate simplex
    unsigned extra_edge_percent = 45;
    unsigned duplications = 3;     // parallel copies of random cells
    unsigned rewires = 4;          // facet component switches on maximal cells
};

/// Random connected subcomplex of a simplex skeleton plus random cell
/// duplications and facet rewirings. The output is always a valid config.
SncConfig generate_random_complex(std::uint64_t seed,
                                  const RandomComplexParams& params = {});

struct FuzzRunRecord {
    std::uint64_t seed = 0;
    int moves = 0;
    std::vector<std::string> digests;  // homology digest per step, start first
    bool pass = true;
    std::string violation;
    double elapsed_ms = 0.0;
    int case1_moves = 0;
    int case2_moves = 0;
    bool contractions_ok = true;
};

struct FuzzOptions {
    int trials = 10;
    int moves_per_trial = 5;
    std::uint64_t seed = 1;
    bool verify_contractions = true;
    CaseWeights weights = {};
    RandomComplexParams params = {};
    int workers = 0;  // 0 = hardware concurrency
};

/// One trial: a random complex, moves_per_trial random valid centers applied
/// in sequence, homology compared after every move. Case-2 moves additionally
/// check exact chain-map commutation and that the contraction induces
/// isomorphisms on rational homology. Violations are recorded, not thrown.
std::vector<FuzzRunRecord> run_fuzz(const FuzzOptions& options);

}  // namespace dualcx
