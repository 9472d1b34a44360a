#pragma once

// Text model for a normal-crossing configuration: the components of all
// intersections of the divisors, with explicit component choices for each
// face. The format is line oriented ('#' starts a comment):
//
//   snc <name>
//   dim <n>
//   divisors <N>
//   cell <k> [<i0> <i1> ... <ik>] <j> ; facets <j'_0> <j'_1> ... <j'_k>
//
// The facets clause is omitted entirely for k = 0. Facet entry s names the
// component of the stratum obtained by deleting label position s.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dualcx/delta_complex.hpp"

namespace dualcx {

struct ParseError : std::runtime_error {
    int line = 0;
    int col = 0;
    ParseError(int line_, int col_, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_) + ", col " +
                             std::to_string(col_) + ": " + what),
          line(line_),
          col(col_) {}
};

struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Stratum {
    std::vector<int> labels;           // strictly increasing divisor indices
    int component = 1;                 // the j superscript
    std::vector<int> facet_components; // one j' per omitted label; empty for depth 1

    int depth() const { return static_cast<int>(labels.size()); }
    bool operator==(const Stratum&) const = default;
};

struct SncConfig {
    std::string name;
    int num_divisors = 0;
    int ambient_dim = 0;
    std::vector<Stratum> strata;

    bool operator==(const SncConfig&) const = default;
};

/// Parses the text format. Syntax errors, out-of-range integers, duplicate
/// stratum ids, non-increasing label tuples and dangling facet references
/// all raise ParseError with position information.
SncConfig parse_config(std::string_view text);

/// Referential checks for programmatically built configs: facet references
/// resolve, depth-1 strata are unique per divisor, labels are in bounds.
ValidationReport validate(const SncConfig& config);

/// One k-cell per depth-(k+1) stratum, facets wired from facet_components.
/// The result always passes delta-complex validation; a facet-compatibility
/// violation raises ValidationError naming the offending stratum.
DeltaComplex build_dual_complex(const SncConfig& config);

/// Inverse of parse_config up to structural equality.
std::string serialize_config(const SncConfig& config);

}  // namespace dualcx
