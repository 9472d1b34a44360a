#pragma once

// Admissible blowup moves on dual complexes. Case 1 is the stellar
// subdivision of a cell's closed star at a fresh vertex; case 2 cones a
// face-closed incidence set to a fresh vertex and carries the contraction
// map that collapses the cones back. Both moves preserve homology, which the
// fuzz driver checks relentlessly.
//
// Move file format, one move per line:
//   move case1 cell=<dim>:<index>
//   move case2 carrier=<dim>:<index> v=<label> incidence=<dim>:<index>,...
//        absorb=<dim>:<index>-><dim>:<index>,...

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "dualcx/delta_complex.hpp"

namespace dualcx {

struct BlowupCenter {
    int case_tag = 1;                  // 1 or 2
    CellId carrier;                    // cell whose stratum contains the center
    std::vector<CellId> incidence;     // case 2: cells whose strata meet it
    int contraction_vertex = 0;        // case 2: label the new vertex collapses to
    std::map<CellId, CellId> absorption;  // case 2: v-free incidence cell -> cone target
};

struct MoveResult {
    DeltaComplex complex_after;
    int new_vertex_label = 0;
    std::optional<DeltaMap> contraction;  // present for case 2 only
};

struct InvalidCenterError : ValidationError {
    int move_index = -1;
    InvalidCenterError(ValidationReport r, int idx = -1)
        : ValidationError(std::move(r)), move_index(idx) {}
};

/// Checks every BlowupCenter invariant against the complex. For case 2 this
/// includes face-closure of the incidence set, well-formed absorption
/// assignments, and the chain-compatibility condition that makes the
/// contraction a chain map (the cone over each incidence cell w containing v
/// must be absorbed from exactly the v-drop of w).
ValidationReport validate_center(const DeltaComplex& complex,
                                 const BlowupCenter& center);

/// Stellar subdivision of the carrier's closed star: cofaces are removed and
/// replaced by joins of the fresh vertex with the proper faces of the carrier
/// and the coface tails. Homeomorphic to the input, so homology is unchanged.
MoveResult apply_case1(const DeltaComplex& complex, CellId carrier);

/// Cones the incidence set to a fresh vertex. Old cells keep their indices;
/// one cone cell is appended per incidence cell. The returned contraction
/// sends the fresh vertex to the contraction vertex and each v-free cone cell
/// onto its absorption target; it commutes with the boundary by construction.
MoveResult apply_case2(const DeltaComplex& complex, const BlowupCenter& center);

/// The structural coning used by apply_case2, exposed on its own: joins a
/// fresh vertex (label num_divisors+1) to every cell of a face-closed set.
DeltaComplex cone_over(const DeltaComplex& complex,
                       const std::vector<CellId>& face_closed_cells);

/// Face closure of a set of cells.
std::vector<CellId> face_closure(const DeltaComplex& complex,
                                 const std::vector<CellId>& generators);

struct CaseWeights {
    unsigned case1 = 1;
    unsigned case2 = 1;
};

/// Deterministic random center: case 1 picks a uniform cell; case 2 picks a
/// vertex label v, closes a random set of v-containing generators under
/// faces, and derives the absorption map from the face lattice. The output
/// always passes validate_center.
BlowupCenter random_center(const DeltaComplex& complex, std::uint64_t seed,
                           CaseWeights weights = {});

/// Folds the moves left to right. The first center that fails validation
/// aborts with InvalidCenterError carrying its index and report.
std::vector<MoveResult> apply_sequence(const DeltaComplex& complex,
                                       const std::vector<BlowupCenter>& centers);

std::vector<BlowupCenter> parse_moves(std::string_view text);
std::string serialize_move(const BlowupCenter& center);

}  // namespace dualcx
