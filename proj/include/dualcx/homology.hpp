#pragma once

// Exact integral simplicial homology. Boundary operators are integer
// matrices; Betti numbers and torsion come from Smith normal form, ranks of
// induced maps from fraction-free elimination. Everything is exact; no
// floating point enters any computation.

#include <cstdint>
#include <string>
#include <vector>

#include "dualcx/delta_complex.hpp"
#include "dualcx/numeric.hpp"

namespace dualcx {

/// Boundary operator in degree k as a ((k-1)-cells x k-cells) matrix. Column
/// of a cell places (-1)^s at the row of its facet at position s, entries
/// summed when several positions hit the same facet cell. For k beyond the
/// complex dimension the matrix is empty with the correct row count.
IntMatrix boundary_matrix(const DeltaComplex& complex, int k);

struct SnfResult {
    IntMatrix d;      // diagonal, non-negative, divisibility chain
    IntMatrix u;      // unimodular, rows
    IntMatrix v;      // unimodular, cols
    IntMatrix u_inv;  // inverse of u, maintained alongside

    Eigen::Index rank() const;
    std::vector<Int> invariant_factors() const;  // the non-zero diagonal
    /// Columns of v spanning the rational kernel of the input.
    IntMatrix kernel_basis() const;
};

/// Smith normal form u*a*v = d. Pivot choice is the smallest non-zero
/// absolute entry, ties broken by row-major position, so the output is
/// deterministic for a given input.
SnfResult smith_normal_form(const IntMatrix& a);

/// Invariant factors only (no transforms). Uses a sparse unit-pivot
/// elimination front end and falls back to dense SNF on the small residue,
/// which makes it practical for complexes with tens of thousands of cells.
std::vector<Int> invariant_factors(const IntMatrix& a);

struct HomologyDegree {
    std::int64_t betti = 0;
    std::vector<Int> torsion;  // invariant factors > 1, sorted

    bool operator==(const HomologyDegree&) const = default;
    bool trivial() const { return betti == 0 && torsion.empty(); }
};

struct HomologyReport {
    bool reduced = false;
    std::vector<HomologyDegree> degrees;  // index = degree

    std::int64_t betti(int k) const;
    const std::vector<Int>* torsion(int k) const;
    /// Equality ignores trailing trivial degrees; moves may raise the
    /// dimension of a complex without changing its homology.
    bool operator==(const HomologyReport& other) const;
    std::string digest() const;
    std::string to_string() const;
};

HomologyReport homology(const DeltaComplex& complex, bool reduced = false);

struct InducedDegreeRank {
    int degree = 0;
    std::int64_t rank = 0;
    std::int64_t betti_source = 0;
    std::int64_t betti_target = 0;
    bool isomorphism = false;
};

struct InducedRanks {
    std::vector<InducedDegreeRank> degrees;
    bool all_isomorphisms() const;
};

/// Rank of the induced map H_k(source; Q) -> H_k(target; Q) in every degree,
/// computed from integer cycle/boundary spanning sets by fraction-free
/// elimination. Throws ValidationError on an invalid map.
InducedRanks induced_homology_ranks(const DeltaMap& map);

/// Exact chain-map commutation: boundary . f = f . boundary in every degree.
bool chain_map_commutes(const DeltaMap& map);

}  // namespace dualcx
