#pragma once

// Test-side oracles, deliberately independent of the library's elimination
// routines: plain rational Gaussian elimination for ranks and determinants,
// and the minor-gcd characterization for invariant factors.

#include <set>
#include <vector>

#include "dualcx/delta_complex.hpp"
#include "dualcx/homology.hpp"
#include "dualcx/numeric.hpp"

namespace oracle {

using dualcx::Int;
using dualcx::IntMatrix;
using dualcx::Rat;
using dualcx::RatMatrix;

inline RatMatrix to_rational(const IntMatrix& a) {
    RatMatrix m(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) m(i, j) = Rat(a(i, j));
    return m;
}

inline Eigen::Index rational_rank(const IntMatrix& a) {
    RatMatrix m = to_rational(a);
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < m.cols() && r < m.rows(); ++c) {
        Eigen::Index pivot = -1;
        for (Eigen::Index i = r; i < m.rows(); ++i)
            if (m(i, c) != 0) { pivot = i; break; }
        if (pivot < 0) continue;
        m.row(pivot).swap(m.row(r));
        for (Eigen::Index i = r + 1; i < m.rows(); ++i) {
            if (m(i, c) == 0) continue;
            Rat f = m(i, c) / m(r, c);
            for (Eigen::Index j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

inline Rat rational_det(const IntMatrix& a) {
    RatMatrix m = to_rational(a);
    Rat det(1);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Eigen::Index pivot = -1;
        for (Eigen::Index i = r; i < m.rows(); ++i)
            if (m(i, r) != 0) { pivot = i; break; }
        if (pivot < 0) return Rat(0);
        if (pivot != r) {
            m.row(pivot).swap(m.row(r));
            det = -det;
        }
        det *= m(r, r);
        for (Eigen::Index i = r + 1; i < m.rows(); ++i) {
            if (m(i, r) == 0) continue;
            Rat f = m(i, r) / m(r, r);
            for (Eigen::Index j = r; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
    }
    return det;
}

// gcd of all k x k minors (0 when every minor vanishes)
inline Int minor_gcd(const IntMatrix& a, int k) {
    using boost::multiprecision::abs;
    using boost::multiprecision::gcd;
    const int rows = static_cast<int>(a.rows());
    const int cols = static_cast<int>(a.cols());
    if (k > rows || k > cols) return Int(0);
    std::vector<int> ri(k), ci(k);
    Int g = 0;
    auto next_combo = [](std::vector<int>& idx, int n) {
        int i = static_cast<int>(idx.size()) - 1;
        while (i >= 0 && idx[i] == n - static_cast<int>(idx.size()) + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (std::size_t j = i + 1; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
        return true;
    };
    for (int i = 0; i < k; ++i) ri[i] = i;
    do {
        for (int i = 0; i < k; ++i) ci[i] = i;
        do {
            IntMatrix sub(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) sub(i, j) = a(ri[i], ci[j]);
            Rat det = rational_det(sub);
            g = gcd(g, abs(boost::multiprecision::numerator(det)));
            if (g == 1) return g;
        } while (next_combo(ci, cols));
    } while (next_combo(ri, rows));
    return g;
}

// Invariant factors via d_k = gcd of k-minors, f_k = d_k / d_{k-1}.
inline std::vector<Int> minor_gcd_invariant_factors(const IntMatrix& a) {
    const auto rank = rational_rank(a);
    std::vector<Int> factors;
    Int prev(1);
    for (Eigen::Index k = 1; k <= rank; ++k) {
        Int dk = minor_gcd(a, static_cast<int>(k));
        factors.push_back(dk / prev);
        prev = dk;
    }
    return factors;
}

inline std::vector<long long> betti_via_ranks(const dualcx::DeltaComplex& complex) {
    std::vector<long long> betti;
    const int dim = complex.dimension();
    std::vector<Eigen::Index> rank(static_cast<std::size_t>(dim) + 2, 0);
    for (int k = 1; k <= dim; ++k)
        rank[static_cast<std::size_t>(k)] =
            rational_rank(dualcx::boundary_matrix(complex, k));
    for (int k = 0; k <= dim; ++k)
        betti.push_back(static_cast<long long>(complex.count(k)) -
                        rank[static_cast<std::size_t>(k)] -
                        rank[static_cast<std::size_t>(k) + 1]);
    return betti;
}

// Downward closure of a cell by brute-force facet walking.
inline std::set<dualcx::CellId> downward_closure(const dualcx::DeltaComplex& complex,
                                                 dualcx::CellId top) {
    std::set<dualcx::CellId> out;
    std::vector<dualcx::CellId> stack{top};
    while (!stack.empty()) {
        dualcx::CellId id = stack.back();
        stack.pop_back();
        if (!out.insert(id).second) continue;
        for (const dualcx::CellId& f : complex.cell(id).facets) stack.push_back(f);
    }
    return out;
}

// Exhaustive coface scan: every cell whose downward closure hits the target.
inline std::vector<dualcx::CellId> brute_force_cofaces(
    const dualcx::DeltaComplex& complex, dualcx::CellId target) {
    std::vector<dualcx::CellId> out;
    for (const dualcx::CellId& id : complex.all_cells())
        if (downward_closure(complex, id).count(target)) out.push_back(id);
    return out;
}

}  // namespace oracle
