#include "dualcx/homology.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace dualcx {

IntMatrix boundary_matrix(const DeltaComplex& complex, int k) {
    if (k < 1) throw std::invalid_argument("boundary_matrix needs k >= 1");
    const Eigen::Index rows = static_cast<Eigen::Index>(complex.count(k - 1));
    const Eigen::Index cols = static_cast<Eigen::Index>(complex.count(k));
    IntMatrix m = IntMatrix::Zero(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        const Cell& cell = complex.cells[k][static_cast<std::size_t>(c)];
        int sign = 1;
        for (int s = 0; s <= k; ++s) {
            m(cell.facets[s].index, c) += sign;
            sign = -sign;
        }
    }
    return m;
}

Eigen::Index SnfResult::rank() const {
    Eigen::Index r = 0;
    const Eigen::Index n = std::min(d.rows(), d.cols());
    for (Eigen::Index i = 0; i < n; ++i)
        if (d(i, i) != 0) ++r;
    return r;
}

std::vector<Int> SnfResult::invariant_factors() const {
    std::vector<Int> out;
    const Eigen::Index n = std::min(d.rows(), d.cols());
    for (Eigen::Index i = 0; i < n; ++i)
        if (d(i, i) != 0) out.push_back(d(i, i));
    return out;
}

IntMatrix SnfResult::kernel_basis() const {
    const Eigen::Index r = rank();
    return v.rightCols(v.cols() - r);
}

namespace {

using boost::multiprecision::abs;

struct Pivot {
    Eigen::Index row = -1, col = -1;
};

Pivot find_pivot(const IntMatrix& m, Eigen::Index t) {
    Pivot best;
    Int best_abs = 0;
    for (Eigen::Index i = t; i < m.rows(); ++i) {
        for (Eigen::Index j = t; j < m.cols(); ++j) {
            if (m(i, j) == 0) continue;
            Int a = abs(m(i, j));
            if (best.row < 0 || a < best_abs) {
                best = {i, j};
                best_abs = a;
                if (best_abs == 1) return best;  // cannot improve
            }
        }
    }
    return best;
}

struct SnfWorker {
    IntMatrix d;
    bool track;
    IntMatrix u, v, u_inv;

    explicit SnfWorker(const IntMatrix& a, bool track_transforms)
        : d(a), track(track_transforms) {
        if (track) {
            u = IntMatrix::Identity(a.rows(), a.rows());
            u_inv = IntMatrix::Identity(a.rows(), a.rows());
            v = IntMatrix::Identity(a.cols(), a.cols());
        }
    }

    void swap_rows(Eigen::Index a, Eigen::Index b) {
        if (a == b) return;
        d.row(a).swap(d.row(b));
        if (track) {
            u.row(a).swap(u.row(b));
            u_inv.col(a).swap(u_inv.col(b));
        }
    }
    void swap_cols(Eigen::Index a, Eigen::Index b) {
        if (a == b) return;
        d.col(a).swap(d.col(b));
        if (track) v.col(a).swap(v.col(b));
    }
    // row a -= q * row b
    void add_row(Eigen::Index a, Eigen::Index b, const Int& q) {
        d.row(a) -= d.row(b) * q;
        if (track) {
            u.row(a) -= u.row(b) * q;
            u_inv.col(b) += u_inv.col(a) * q;
        }
    }
    // col a -= q * col b
    void add_col(Eigen::Index a, Eigen::Index b, const Int& q) {
        d.col(a) -= d.col(b) * q;
        if (track) v.col(a) -= v.col(b) * q;
    }
    void negate_row(Eigen::Index a) {
        d.row(a) = -d.row(a);
        if (track) {
            u.row(a) = -u.row(a);
            u_inv.col(a) = -u_inv.col(a);
        }
    }

    void run() {
        const Eigen::Index n = std::min(d.rows(), d.cols());
        for (Eigen::Index t = 0; t < n; ++t) {
            Pivot p = find_pivot(d, t);
            if (p.row < 0) break;
            swap_rows(t, p.row);
            swap_cols(t, p.col);
            for (;;) {
                // Clear the pivot column. Remainders become new, smaller
                // pivots, so the loop terminates.
                bool clean = false;
                while (!clean) {
                    clean = true;
                    for (Eigen::Index i = t + 1; i < d.rows(); ++i) {
                        if (d(i, t) == 0) continue;
                        Int q = d(i, t) / d(t, t);
                        if (q != 0) add_row(i, t, q);
                        if (d(i, t) != 0) {
                            swap_rows(t, i);
                            clean = false;
                        }
                    }
                }
                // Clear the pivot row; may reintroduce column entries.
                bool row_clean = true;
                for (Eigen::Index j = t + 1; j < d.cols(); ++j) {
                    if (d(t, j) == 0) continue;
                    Int q = d(t, j) / d(t, t);
                    if (q != 0) add_col(j, t, q);
                    if (d(t, j) != 0) {
                        swap_cols(t, j);
                        row_clean = false;
                    }
                }
                if (!row_clean) continue;
                bool col_clean = true;
                for (Eigen::Index i = t + 1; i < d.rows(); ++i)
                    if (d(i, t) != 0) col_clean = false;
                if (!col_clean) continue;

                // Enforce divisibility into the remaining block.
                bool divisible = true;
                for (Eigen::Index i = t + 1; i < d.rows() && divisible; ++i)
                    for (Eigen::Index j = t + 1; j < d.cols() && divisible; ++j)
                        if (d(i, j) % d(t, t) != 0) {
                            add_row(t, i, Int(-1));  // row t += row i
                            divisible = false;
                        }
                if (divisible) break;
            }
            if (d(t, t) < 0) negate_row(t);
        }
    }
};

// ---------------------------------------------------------------------------
// Sparse unit-pivot elimination. Pivoting on a +-1 entry and clearing its row
// with column operations leaves the pivot column removable without touching
// the rest of the matrix, so each pivot contributes invariant factor 1 and
// shrinks the problem. The residue without unit entries goes to dense SNF.

struct SparseEntry {
    int row;
    Int value;
};

struct SparseElimination {
    int nrows = 0, ncols = 0;
    std::vector<std::vector<SparseEntry>> cols;  // sorted by row
    std::vector<std::vector<int>> row_cols;      // lazy: may hold stale cols
    std::vector<char> row_alive, col_alive;
    std::vector<int> row_nnz, col_nnz;
    long long unit_rank = 0;

    // lazily validated min-heap of unit-entry candidates
    struct Candidate {
        long long cost;
        int row, col;
        bool operator>(const Candidate& o) const {
            return std::tie(cost, row, col) > std::tie(o.cost, o.row, o.col);
        }
    };
    std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap;

    void init(int rows_, int cols_) {
        nrows = rows_;
        ncols = cols_;
        cols.assign(ncols, {});
        row_cols.assign(nrows, {});
        row_alive.assign(nrows, 1);
        col_alive.assign(ncols, 1);
        row_nnz.assign(nrows, 0);
        col_nnz.assign(ncols, 0);
    }

    void set_column(int c, std::vector<SparseEntry> entries) {
        cols[c] = std::move(entries);
        col_nnz[c] = static_cast<int>(cols[c].size());
        for (const auto& e : cols[c]) {
            row_cols[e.row].push_back(c);
            ++row_nnz[e.row];
        }
    }

    const Int* value_at(int c, int r) const {
        const auto& col = cols[c];
        auto it = std::lower_bound(
            col.begin(), col.end(), r,
            [](const SparseEntry& e, int row) { return e.row < row; });
        if (it == col.end() || it->row != r) return nullptr;
        return &it->value;
    }

    long long markowitz(int r, int c) const {
        return static_cast<long long>(row_nnz[r] - 1) * (col_nnz[c] - 1);
    }

    void seed_candidates() {
        for (int c = 0; c < ncols; ++c)
            for (const auto& e : cols[c])
                if (abs(e.value) == 1)
                    heap.push({markowitz(e.row, c), e.row, c});
    }

    // col_a -= factor * col_b, maintaining row indices and counts.
    void combine(int a, int b, const Int& factor) {
        std::vector<SparseEntry> merged;
        merged.reserve(cols[a].size() + cols[b].size());
        auto ia = cols[a].begin(), ea = cols[a].end();
        auto ib = cols[b].begin(), eb = cols[b].end();
        while (ia != ea || ib != eb) {
            if (ib == eb || (ia != ea && ia->row < ib->row)) {
                merged.push_back(*ia++);
            } else if (ia == ea || ib->row < ia->row) {
                Int v = -factor * ib->value;
                if (v != 0) {
                    merged.push_back({ib->row, std::move(v)});
                    ++row_nnz[ib->row];
                    row_cols[ib->row].push_back(a);
                    if (abs(merged.back().value) == 1)
                        heap.push({markowitz(ib->row, a), ib->row, a});
                }
                ++ib;
            } else {
                Int v = ia->value - factor * ib->value;
                if (v == 0) {
                    --row_nnz[ia->row];
                } else {
                    merged.push_back({ia->row, std::move(v)});
                    if (abs(merged.back().value) == 1)
                        heap.push({markowitz(ia->row, a), ia->row, a});
                }
                ++ia;
                ++ib;
            }
        }
        cols[a] = std::move(merged);
        col_nnz[a] = static_cast<int>(cols[a].size());
    }

    void eliminate() {
        seed_candidates();
        while (!heap.empty()) {
            Candidate cand = heap.top();
            heap.pop();
            if (!row_alive[cand.row] || !col_alive[cand.col]) continue;
            const Int* val = value_at(cand.col, cand.row);
            if (!val || abs(*val) != 1) continue;
            long long cost = markowitz(cand.row, cand.col);
            if (cost != cand.cost) {
                heap.push({cost, cand.row, cand.col});
                continue;
            }
            pivot(cand.row, cand.col, *val);
        }
    }

    void pivot(int r, int c, Int pivot_value) {
        // Clear row r from every other alive column.
        std::vector<int> affected;
        affected.swap(row_cols[r]);
        std::sort(affected.begin(), affected.end());
        affected.erase(std::unique(affected.begin(), affected.end()),
                       affected.end());
        for (int other : affected) {
            if (other == c || !col_alive[other]) continue;
            const Int* coeff = value_at(other, r);
            if (!coeff) continue;  // stale index entry
            Int factor = *coeff * pivot_value;  // pivot_value^2 == 1
            combine(other, c, factor);
        }
        // Retire the pivot column; clearing its stray entries corresponds to
        // row operations that touch no other column.
        for (const auto& e : cols[c])
            if (e.row != r) --row_nnz[e.row];
        cols[c].clear();
        col_nnz[c] = 0;
        col_alive[c] = 0;
        row_alive[r] = 0;
        row_nnz[r] = 0;
        ++unit_rank;
    }

    IntMatrix residue() const {
        std::vector<int> live_rows;
        for (int r = 0; r < nrows; ++r)
            if (row_alive[r] && row_nnz[r] > 0) live_rows.push_back(r);
        std::map<int, int> row_pos;
        for (int i = 0; i < static_cast<int>(live_rows.size()); ++i)
            row_pos[live_rows[i]] = i;
        std::vector<int> live_cols;
        for (int c = 0; c < ncols; ++c)
            if (col_alive[c] && col_nnz[c] > 0) live_cols.push_back(c);
        IntMatrix m = IntMatrix::Zero(static_cast<Eigen::Index>(live_rows.size()),
                                      static_cast<Eigen::Index>(live_cols.size()));
        for (int j = 0; j < static_cast<int>(live_cols.size()); ++j)
            for (const auto& e : cols[live_cols[j]])
                m(row_pos.at(e.row), j) = e.value;
        return m;
    }
};

std::vector<Int> factors_from_sparse(SparseElimination& elim) {
    elim.eliminate();
    IntMatrix residue = elim.residue();
    std::vector<Int> factors(static_cast<std::size_t>(elim.unit_rank), Int(1));
    if (residue.rows() > 0 && residue.cols() > 0) {
        SnfWorker worker(residue, /*track_transforms=*/false);
        worker.run();
        const Eigen::Index n = std::min(residue.rows(), residue.cols());
        for (Eigen::Index i = 0; i < n; ++i)
            if (worker.d(i, i) != 0) factors.push_back(worker.d(i, i));
    }
    return factors;
}

// Boundary operator of the complex in degree k, fed straight into the sparse
// eliminator without materializing a dense matrix.
std::vector<Int> boundary_invariant_factors(const DeltaComplex& complex, int k) {
    const int rows = static_cast<int>(complex.count(k - 1));
    const int cols = static_cast<int>(complex.count(k));
    SparseElimination elim;
    elim.init(rows, cols);
    for (int c = 0; c < cols; ++c) {
        const Cell& cell = complex.cells[k][static_cast<std::size_t>(c)];
        std::map<int, Int> entries;
        int sign = 1;
        for (int s = 0; s <= k; ++s) {
            entries[cell.facets[s].index] += sign;
            sign = -sign;
        }
        std::vector<SparseEntry> col;
        for (auto& [row, value] : entries)
            if (value != 0) col.push_back({row, std::move(value)});
        elim.set_column(c, std::move(col));
    }
    return factors_from_sparse(elim);
}

}  // namespace

SnfResult smith_normal_form(const IntMatrix& a) {
    SnfWorker worker(a, /*track_transforms=*/true);
    worker.run();
    return SnfResult{std::move(worker.d), std::move(worker.u),
                     std::move(worker.v), std::move(worker.u_inv)};
}

std::vector<Int> invariant_factors(const IntMatrix& a) {
    SparseElimination elim;
    elim.init(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        std::vector<SparseEntry> col;
        for (Eigen::Index r = 0; r < a.rows(); ++r)
            if (a(r, c) != 0) col.push_back({static_cast<int>(r), a(r, c)});
        elim.set_column(static_cast<int>(c), std::move(col));
    }
    return factors_from_sparse(elim);
}

std::int64_t HomologyReport::betti(int k) const {
    if (k < 0 || k >= static_cast<int>(degrees.size())) return 0;
    return degrees[k].betti;
}

const std::vector<Int>* HomologyReport::torsion(int k) const {
    if (k < 0 || k >= static_cast<int>(degrees.size())) return nullptr;
    return &degrees[k].torsion;
}

bool HomologyReport::operator==(const HomologyReport& other) const {
    if (reduced != other.reduced) return false;
    std::size_t na = degrees.size(), nb = other.degrees.size();
    while (na > 0 && degrees[na - 1].trivial()) --na;
    while (nb > 0 && other.degrees[nb - 1].trivial()) --nb;
    if (na != nb) return false;
    for (std::size_t i = 0; i < na; ++i)
        if (!(degrees[i] == other.degrees[i])) return false;
    return true;
}

std::string HomologyReport::digest() const {
    std::ostringstream os;
    std::size_t n = degrees.size();
    while (n > 0 && degrees[n - 1].trivial()) --n;
    os << (reduced ? "r" : "u");
    for (std::size_t k = 0; k < n; ++k) {
        os << "|" << degrees[k].betti;
        for (const Int& t : degrees[k].torsion) os << "t" << t;
    }
    return os.str();
}

std::string HomologyReport::to_string() const {
    std::ostringstream os;
    os << (reduced ? "reduced " : "") << "betti (";
    for (std::size_t k = 0; k < degrees.size(); ++k) {
        if (k) os << ", ";
        os << degrees[k].betti;
    }
    os << ")";
    bool any_torsion = false;
    for (const auto& d : degrees)
        if (!d.torsion.empty()) any_torsion = true;
    if (any_torsion) {
        os << ", torsion";
        for (std::size_t k = 0; k < degrees.size(); ++k) {
            if (degrees[k].torsion.empty()) continue;
            os << " H" << k << "={";
            for (std::size_t i = 0; i < degrees[k].torsion.size(); ++i) {
                if (i) os << ",";
                os << degrees[k].torsion[i];
            }
            os << "}";
        }
    }
    return os.str();
}

HomologyReport homology(const DeltaComplex& complex, bool reduced) {
    HomologyReport report;
    report.reduced = reduced;
    const int dim = complex.dimension();
    if (dim < 0) return report;

    // factors[k] = invariant factors of the degree-k boundary operator.
    std::vector<std::vector<Int>> factors(static_cast<std::size_t>(dim) + 2);
    for (int k = 1; k <= dim; ++k)
        factors[static_cast<std::size_t>(k)] = boundary_invariant_factors(complex, k);

    report.degrees.resize(static_cast<std::size_t>(dim) + 1);
    for (int k = 0; k <= dim; ++k) {
        const auto rank_k =
            static_cast<std::int64_t>(factors[static_cast<std::size_t>(k)].size());
        const auto rank_k1 =
            static_cast<std::int64_t>(factors[static_cast<std::size_t>(k) + 1].size());
        HomologyDegree& deg = report.degrees[static_cast<std::size_t>(k)];
        deg.betti = static_cast<std::int64_t>(complex.count(k)) - rank_k - rank_k1;
        for (const Int& f : factors[static_cast<std::size_t>(k) + 1])
            if (f > 1) deg.torsion.push_back(f);
        std::sort(deg.torsion.begin(), deg.torsion.end());
    }
    if (reduced && !report.degrees.empty() && complex.count(0) > 0)
        report.degrees[0].betti -= 1;
    return report;
}

bool InducedRanks::all_isomorphisms() const {
    for (const auto& d : degrees)
        if (!d.isomorphism) return false;
    return true;
}

InducedRanks induced_homology_ranks(const DeltaMap& map) {
    ValidationReport vrep = validate(map);
    if (!vrep.ok()) throw ValidationError(std::move(vrep));

    const HomologyReport hs = homology(map.source);
    const HomologyReport ht = homology(map.target);
    const int max_dim = std::max({map.source.dimension(), map.target.dimension(), 0});

    InducedRanks out;
    for (int k = 0; k <= max_dim; ++k) {
        const Eigen::Index ns = static_cast<Eigen::Index>(map.source.count(k));
        IntMatrix cycles;  // columns spanning ker(boundary_k) of the source
        if (k == 0) {
            cycles = IntMatrix::Identity(ns, ns);
        } else if (ns == 0) {
            cycles = IntMatrix::Zero(0, 0);
        } else {
            cycles = smith_normal_form(boundary_matrix(map.source, k)).kernel_basis();
        }
        IntMatrix f = detail::build_chain_map_unchecked(map, k);
        IntMatrix boundaries;  // columns spanning im(boundary_{k+1}) of target
        if (k + 1 <= map.target.dimension())
            boundaries = boundary_matrix(map.target, k + 1);
        else
            boundaries = IntMatrix::Zero(static_cast<Eigen::Index>(map.target.count(k)), 0);

        IntMatrix mapped = f * cycles;
        IntMatrix joint(mapped.rows(), mapped.cols() + boundaries.cols());
        joint << mapped, boundaries;
        const auto rank_joint = static_cast<std::int64_t>(fraction_free_rank<Int>(joint));
        const auto rank_b = static_cast<std::int64_t>(fraction_free_rank<Int>(boundaries));

        InducedDegreeRank deg;
        deg.degree = k;
        deg.rank = rank_joint - rank_b;
        deg.betti_source = hs.betti(k);
        deg.betti_target = ht.betti(k);
        deg.isomorphism =
            deg.rank == deg.betti_source && deg.rank == deg.betti_target;
        out.degrees.push_back(deg);
    }
    return out;
}

bool chain_map_commutes(const DeltaMap& map) {
    const int max_k = std::max(map.source.dimension(), 1);
    for (int k = 1; k <= max_k; ++k) {
        IntMatrix fk = detail::build_chain_map_unchecked(map, k);
        IntMatrix fk1 = detail::build_chain_map_unchecked(map, k - 1);
        IntMatrix d_src = k <= map.source.dimension()
                              ? boundary_matrix(map.source, k)
                              : IntMatrix::Zero(static_cast<Eigen::Index>(
                                                    map.source.count(k - 1)),
                                                0);
        IntMatrix d_tgt = k <= map.target.dimension()
                              ? boundary_matrix(map.target, k)
                              : IntMatrix::Zero(static_cast<Eigen::Index>(
                                                    map.target.count(k - 1)),
                                                static_cast<Eigen::Index>(
                                                    map.target.count(k)));
        IntMatrix lhs = d_tgt * fk;
        IntMatrix rhs = fk1 * d_src;
        if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) return false;
        if (lhs != rhs) return false;
    }
    return true;
}

}  // namespace dualcx
