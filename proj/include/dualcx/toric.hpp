#pragma once

// Rational simplicial cones and fans with exact integer arithmetic:
// multiplicities, stellar subdivision, resolution to a smooth fan, and the
// two dual-complex constructions (cross-section complex of a fan and its
// interior part after deleting stars of boundary rays).
//
// Fan file format (UTF-8, line oriented, '#' comments):
//   fan <name>
//   dim <n>
//   ray <x1> <x2> ... <xn>          # rays are numbered from 1 in file order
//   cone <r1> <r2> ...
//   boundary <r1> <r2> ...
//
// A cone line with more than <n> rays describes a non-simplicial cone by its
// extreme rays in convex cyclic order; this is supported for n <= 3 only.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dualcx/delta_complex.hpp"
#include "dualcx/numeric.hpp"

namespace dualcx {

struct Fan {
    std::string name;
    int dim = 0;
    std::vector<IntVector> rays;          // primitive, pairwise distinct
    std::vector<std::vector<int>> cones;  // 0-based ray indices
    std::set<int> boundary_rays;          // 0-based ray indices

    bool operator==(const Fan&) const = default;
};

/// Sorts simplicial cones, closes the cone set under faces and drops
/// duplicates. Non-simplicial cones (more rays than dim) keep their cyclic
/// ray order untouched.
Fan canonicalize(const Fan& fan);

bool is_simplicial_cone(const Fan& fan, const std::vector<int>& cone);

/// gcd of the maximal minors of the ray matrix (|det| in the square case).
/// Throws on linearly dependent generators.
Int cone_multiplicity(const Fan& fan, const std::vector<int>& cone);
Int cone_multiplicity(const std::vector<IntVector>& rays);

struct SmoothnessReport {
    bool smooth = true;
    std::vector<std::vector<int>> non_smooth_cones;
};

SmoothnessReport is_smooth_fan(const Fan& fan);

/// Structural and geometric fan checks: primitive distinct rays, simplicial
/// cones, face closure, and pairwise intersection in common faces (exact,
/// desk scale: relative interiors of distinct cones must not meet).
ValidationReport validate(const Fan& fan);

/// Stellar subdivision at a primitive ray inside the support. Every cone
/// containing the ray's minimal carrier cone is replaced by joins of the ray
/// with its faces not containing the carrier. Subdividing at an existing ray
/// returns the fan unchanged.
Fan stellar_subdivide_fan(const Fan& fan, const IntVector& new_ray);

/// Triangulates every non-simplicial cone (fan triangulation from the first
/// ray of the cycle). Throws UnsupportedError for non-simplicial input with
/// dim > 3 and ValidationError when the rays are not in convex position.
Fan triangulate_fan(const Fan& fan);

struct ResolveStep {
    std::vector<int> cone;              // subdivided cone (ray indices)
    IntVector ray;                      // chosen subdivision point
    std::vector<Int> multiplicities_before;  // over all cones, sorted desc
    std::vector<Int> multiplicities_after;
};

struct ResolveTrace {
    std::vector<ResolveStep> steps;
};

/// Lattice points of the half-open fundamental parallelepiped of a
/// simplicial cone, zero excluded, enumerated through the quotient group of
/// the generated sublattice (Smith normal form of the ray matrix).
std::vector<IntVector> parallelepiped_points(const Fan& fan,
                                             const std::vector<int>& cone);

/// The canonical subdivision point of a non-smooth cone: the parallelepiped
/// point with the smallest fractional-coordinate sum, ties broken by the
/// lexicographically smallest coordinate vector. Always primitive.
IntVector select_subdivision_point(const Fan& fan, const std::vector<int>& cone);

/// Refines the fan by stellar subdivisions until every cone is smooth. The
/// subdivision point is the parallelepiped lattice point minimizing the sum
/// of its fractional coordinates (ties: lexicographically smallest vector);
/// the multiset of cone multiplicities strictly decreases at every step.
Fan resolve_fan(const Fan& fan, ResolveTrace* trace = nullptr);

/// The simplicial complex of the fan's cones: one (k)-cell per (k+1)-ray
/// cone, vertex labels = 1-based ray indices.
DeltaComplex cross_section_complex(const Fan& fan);

/// Cross-section complex with every cell touching a boundary ray deleted.
/// The default boundary set is the fan's flagged rays.
DeltaComplex interior_complex(const Fan& fan,
                              const std::optional<std::set<int>>& boundary =
                                  std::nullopt);

/// Exact support comparison of a simplicial fan against a refinement of it,
/// by per-cone rational volume sums of a common cross-section functional.
bool verify_refinement_support(const Fan& input, const Fan& refined);

Fan parse_fan(std::string_view text);
std::string serialize_fan(const Fan& fan);

}  // namespace dualcx
