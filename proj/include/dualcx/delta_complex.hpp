#pragma once

// Delta-complexes with divisor-labeled vertices. A cell of dimension k
// carries a strictly increasing tuple of k+1 divisor labels, a component
// index distinguishing parallel cells on the same label tuple, and one
// explicit facet reference per omitted label. Complexes are immutable
// values: every transformation builds a fresh complex.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dualcx/numeric.hpp"

namespace dualcx {

struct CellId {
    int dim = 0;
    int index = 0;
    auto operator<=>(const CellId&) const = default;
};

std::string to_string(const CellId& id);

struct Cell {
    std::vector<int> labels;       // strictly increasing divisor indices
    int component = 1;             // distinguishes cells on equal label tuples
    std::vector<CellId> facets;    // entry s = cell with labels minus position s

    int dimension() const { return static_cast<int>(labels.size()) - 1; }
    bool operator==(const Cell&) const = default;
};

class DeltaComplex {
public:
    int num_divisors = 0;
    std::optional<int> ambient_dim;
    std::vector<std::vector<Cell>> cells;  // cells[d] = all d-cells

    /// Largest dimension carrying a cell, or -1 for the empty complex.
    int dimension() const;
    std::size_t total_cells() const;
    bool has_cell(CellId id) const;
    const Cell& cell(CellId id) const;  // throws std::out_of_range
    std::size_t count(int dim) const;

    /// The unique 0-cell carrying the given divisor label, if present.
    std::optional<CellId> find_vertex(int label) const;

    /// All cells in (dimension, index) order.
    std::vector<CellId> all_cells() const;

    bool operator==(const DeltaComplex&) const = default;
};

struct Violation {
    std::string message;
    std::vector<CellId> cells;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

struct ValidationError : std::runtime_error {
    ValidationReport report;
    explicit ValidationError(ValidationReport r)
        : std::runtime_error(r.to_string()), report(std::move(r)) {}
};

/// Checks every structural invariant: label tuples strictly increasing and in
/// bounds, facet references resolving to cells with the correct label tuple,
/// uniqueness of the vertex per divisor label, uniqueness of (labels,
/// component) pairs, pairwise facet compatibility, and the ambient dimension
/// bound when set. An empty report means the complex is valid.
ValidationReport validate(const DeltaComplex& complex);

std::vector<std::size_t> f_vector(const DeltaComplex& complex);
long long euler_characteristic(const DeltaComplex& complex);

struct ComponentPartition {
    std::vector<int> component_of_vertex;  // indexed like cells[0]
    int count = 0;
};

/// Partition of the 0-cells induced by the 1-skeleton.
ComponentPartition connected_components(const DeltaComplex& complex);

/// Every cell having the given cell as an iterated face, the cell itself
/// included. Result is sorted by (dimension, index).
std::vector<CellId> cofaces(const DeltaComplex& complex, CellId cell);

/// The iterated face of a cell obtained by deleting a set of its labels.
/// Well-defined by facet compatibility; order of deletion does not matter.
CellId iterated_face(const DeltaComplex& complex, CellId cell,
                     const std::vector<int>& labels_to_delete);

/// Rebuilds a complex under an order-preserving relabeling of divisors.
DeltaComplex relabel_divisors(const DeltaComplex& complex,
                              const std::map<int, int>& relabeling,
                              int new_num_divisors);

/// A simplicial map between complexes. Vertices map by divisor label; every
/// cell maps to a target cell or to DEGENERATE (encoded as nullopt), the
/// latter exactly when the vertex assignment collapses two of its labels.
struct DeltaMap {
    DeltaComplex source;
    DeltaComplex target;
    std::map<int, int> vertex_assignment;  // source label -> target label
    std::vector<std::vector<std::optional<CellId>>> cell_assignment;
};

ValidationReport validate(const DeltaMap& map);

/// Matrix of the induced chain map in degree k (target k-cells x source
/// k-cells). Degenerate cells contribute zero columns; a non-degenerate cell
/// contributes a single +-1, the sign being the parity of the permutation
/// sorting the image label sequence. Throws ValidationError on an invalid map.
IntMatrix build_chain_map(const DeltaMap& map, int k);

namespace detail {
// Unchecked variant used after a map has already been validated.
IntMatrix build_chain_map_unchecked(const DeltaMap& map, int k);
}  // namespace detail

}  // namespace dualcx
