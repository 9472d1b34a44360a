#include "dualcx/toric.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "dualcx/homology.hpp"  // smith_normal_form
#include "dualcx/snc_config.hpp"  // ParseError, UnsupportedError

namespace dualcx {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::gcd;

Int vector_gcd(const IntVector& v) {
    Int g = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) g = gcd(g, abs(v(i)));
    return g;
}

std::string cone_name(const std::vector<int>& cone) {
    std::string s = "<";
    for (std::size_t i = 0; i < cone.size(); ++i) {
        if (i) s += " ";
        s += std::to_string(cone[i] + 1);
    }
    return s + ">";
}

IntMatrix ray_matrix(const Fan& fan, const std::vector<int>& cone) {
    IntMatrix m(fan.dim, static_cast<Eigen::Index>(cone.size()));
    for (std::size_t j = 0; j < cone.size(); ++j)
        m.col(static_cast<Eigen::Index>(j)) = fan.rays[cone[j]];
    return m;
}

// Reduced row echelon form over the rationals; returns pivot columns.
std::vector<int> rref(RatMatrix& m) {
    std::vector<int> pivots;
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < m.cols() && r < m.rows(); ++c) {
        Eigen::Index p = -1;
        for (Eigen::Index i = r; i < m.rows(); ++i)
            if (m(i, c) != 0) { p = i; break; }
        if (p < 0) continue;
        m.row(p).swap(m.row(r));
        Rat inv = m(r, c);
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(r, j) /= inv;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rat f = m(i, c);
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    return pivots;
}

// Unique rational solution of (rays of cone) * c = point, if consistent.
std::optional<RatVector> cone_coordinates(const Fan& fan,
                                          const std::vector<int>& cone,
                                          const IntVector& point) {
    const Eigen::Index k = static_cast<Eigen::Index>(cone.size());
    RatMatrix m(fan.dim, k + 1);
    for (Eigen::Index j = 0; j < k; ++j)
        for (int i = 0; i < fan.dim; ++i) m(i, j) = Rat(fan.rays[cone[j]](i));
    for (int i = 0; i < fan.dim; ++i) m(i, k) = Rat(point(i));
    std::vector<int> pivots = rref(m);
    if (!pivots.empty() && pivots.back() == static_cast<int>(k))
        return std::nullopt;  // inconsistent
    RatVector c = RatVector::Zero(k);
    for (std::size_t r = 0; r < pivots.size(); ++r) c(pivots[r]) = m(r, k);
    // Columns are independent for simplicial cones, so all k are pivots when
    // the system is consistent; spell the check out anyway.
    if (static_cast<Eigen::Index>(pivots.size()) != k) {
        RatVector residue = RatVector::Zero(fan.dim);
        for (int i = 0; i < fan.dim; ++i) {
            Rat acc(point(i));
            for (Eigen::Index j = 0; j < k; ++j) acc -= Rat(fan.rays[cone[j]](i)) * c(j);
            residue(i) = acc;
        }
        for (int i = 0; i < fan.dim; ++i)
            if (residue(i) != 0) return std::nullopt;
    }
    return c;
}

// Linear feasibility of { x : equalities * x = 0, x_i >= 1 } by Gaussian
// substitution followed by Fourier-Motzkin elimination. Exact rationals.
bool positive_combination_exists(const RatMatrix& equalities) {
    const Eigen::Index m = equalities.cols();
    RatMatrix e = equalities;
    std::vector<int> pivots = rref(e);
    std::vector<bool> is_pivot(m, false);
    std::vector<int> pivot_row(m, -1);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        is_pivot[pivots[r]] = true;
        pivot_row[pivots[r]] = static_cast<int>(r);
    }
    std::vector<int> free_vars;
    for (Eigen::Index j = 0; j < m; ++j)
        if (!is_pivot[j]) free_vars.push_back(static_cast<int>(j));

    // Inequalities sum_f coef[f] * x_f >= rhs in the free variables.
    struct Row {
        std::vector<Rat> coef;
        Rat rhs;
    };
    std::vector<Row> rows;
    for (Eigen::Index j = 0; j < m; ++j) {
        Row row;
        row.coef.assign(free_vars.size(), Rat(0));
        row.rhs = Rat(1);
        if (is_pivot[j]) {
            // x_j = -sum over free of e(pivot_row, f) x_f
            for (std::size_t f = 0; f < free_vars.size(); ++f)
                row.coef[f] = -e(pivot_row[j], free_vars[f]);
        } else {
            for (std::size_t f = 0; f < free_vars.size(); ++f)
                if (free_vars[f] == static_cast<int>(j)) row.coef[f] = Rat(1);
        }
        rows.push_back(std::move(row));
    }

    for (std::size_t f = 0; f < free_vars.size(); ++f) {
        std::vector<Row> pos, neg, zero;
        for (auto& row : rows) {
            if (row.coef[f] > 0) pos.push_back(std::move(row));
            else if (row.coef[f] < 0) neg.push_back(std::move(row));
            else zero.push_back(std::move(row));
        }
        rows = std::move(zero);
        for (const Row& p : pos) {
            for (const Row& n : neg) {
                Row combined;
                combined.coef.assign(free_vars.size(), Rat(0));
                Rat a = -n.coef[f];  // positive
                Rat b = p.coef[f];   // positive
                for (std::size_t j = 0; j < free_vars.size(); ++j)
                    combined.coef[j] = a * p.coef[j] + b * n.coef[j];
                combined.rhs = a * p.rhs + b * n.rhs;
                rows.push_back(std::move(combined));
            }
        }
    }
    for (const Row& row : rows)
        if (row.rhs > 0) return false;  // 0 >= positive
    return true;
}

std::vector<Int> multiplicity_multiset(const Fan& fan) {
    std::vector<Int> mults;
    for (const auto& cone : fan.cones) mults.push_back(cone_multiplicity(fan, cone));
    std::sort(mults.begin(), mults.end(), std::greater<Int>());
    return mults;
}

// true if a < b in the descending-lexicographic order on sorted multisets,
// missing entries reading as zero.
bool multiset_less(const std::vector<Int>& a, const std::vector<Int>& b) {
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
        Int x = i < a.size() ? a[i] : Int(0);
        Int y = i < b.size() ? b[i] : Int(0);
        if (x != y) return x < y;
    }
    return false;
}

}  // namespace

bool is_simplicial_cone(const Fan& fan, const std::vector<int>& cone) {
    if (static_cast<int>(cone.size()) > fan.dim) return false;
    return fraction_free_rank<Int>(ray_matrix(fan, cone)) ==
           static_cast<Eigen::Index>(cone.size());
}

Fan canonicalize(const Fan& fan) {
    Fan out = fan;
    std::set<std::vector<int>> simplicial;
    std::vector<std::vector<int>> other;
    for (const auto& cone : fan.cones) {
        if (cone.empty()) continue;
        if (static_cast<int>(cone.size()) <= fan.dim) {
            std::vector<int> sorted = cone;
            std::sort(sorted.begin(), sorted.end());
            sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
            // close under faces: all non-empty subsets
            const std::size_t n = sorted.size();
            for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
                std::vector<int> face;
                for (std::size_t b = 0; b < n; ++b)
                    if (mask & (1u << b)) face.push_back(sorted[b]);
                simplicial.insert(std::move(face));
            }
        } else {
            other.push_back(cone);
        }
    }
    out.cones.clear();
    for (const auto& cone : simplicial) out.cones.push_back(cone);
    std::stable_sort(out.cones.begin(), out.cones.end(),
                     [](const auto& a, const auto& b) {
                         if (a.size() != b.size()) return a.size() < b.size();
                         return a < b;
                     });
    for (auto& cone : other) out.cones.push_back(std::move(cone));
    return out;
}

Int cone_multiplicity(const std::vector<IntVector>& rays) {
    if (rays.empty()) throw std::invalid_argument("empty ray set");
    const Eigen::Index n = rays[0].size();
    const Eigen::Index k = static_cast<Eigen::Index>(rays.size());
    IntMatrix m(n, k);
    for (Eigen::Index j = 0; j < k; ++j) m.col(j) = rays[j];
    if (fraction_free_rank<Int>(m) != k)
        throw std::invalid_argument("dependent cone generators");
    if (k == n) return abs(fraction_free_determinant<Int>(m));
    // gcd over all k x k minors
    std::vector<int> rows(k);
    for (Eigen::Index i = 0; i < k; ++i) rows[i] = static_cast<int>(i);
    Int g = 0;
    for (;;) {
        IntMatrix sub(k, k);
        for (Eigen::Index i = 0; i < k; ++i) sub.row(i) = m.row(rows[i]);
        g = gcd(g, abs(fraction_free_determinant<Int>(sub)));
        if (g == 1) return g;
        // next combination
        int i = static_cast<int>(k) - 1;
        while (i >= 0 && rows[i] == static_cast<int>(n) - static_cast<int>(k) + i) --i;
        if (i < 0) break;
        ++rows[i];
        for (int j = i + 1; j < static_cast<int>(k); ++j) rows[j] = rows[j - 1] + 1;
    }
    return g;
}

Int cone_multiplicity(const Fan& fan, const std::vector<int>& cone) {
    std::vector<IntVector> rays;
    rays.reserve(cone.size());
    for (int idx : cone) rays.push_back(fan.rays.at(idx));
    return cone_multiplicity(rays);
}

SmoothnessReport is_smooth_fan(const Fan& fan) {
    SmoothnessReport report;
    for (const auto& cone : fan.cones) {
        if (cone_multiplicity(fan, cone) != 1) {
            report.smooth = false;
            report.non_smooth_cones.push_back(cone);
        }
    }
    return report;
}

ValidationReport validate(const Fan& fan) {
    ValidationReport report;
    auto add = [&report](std::string msg) {
        report.violations.push_back({std::move(msg), {}});
    };

    std::set<std::vector<Int>> seen_rays;
    for (std::size_t i = 0; i < fan.rays.size(); ++i) {
        const IntVector& r = fan.rays[i];
        if (r.size() != fan.dim) {
            add("ray " + std::to_string(i + 1) + " has wrong dimension");
            continue;
        }
        Int g = vector_gcd(r);
        if (g == 0) add("ray " + std::to_string(i + 1) + " is zero");
        else if (g != 1) add("ray " + std::to_string(i + 1) + " is not primitive");
        std::vector<Int> key(r.data(), r.data() + r.size());
        if (!seen_rays.insert(key).second)
            add("duplicate ray " + std::to_string(i + 1));
    }
    if (!report.ok()) return report;

    std::set<std::vector<int>> cone_set;
    for (const auto& cone : fan.cones) {
        if (cone.empty()) add("empty cone");
        for (int idx : cone)
            if (idx < 0 || idx >= static_cast<int>(fan.rays.size()))
                add("cone " + cone_name(cone) + " references missing ray");
        if (!std::is_sorted(cone.begin(), cone.end()) ||
            std::adjacent_find(cone.begin(), cone.end()) != cone.end()) {
            add("cone " + cone_name(cone) + " not in canonical sorted form");
            continue;
        }
        if (!is_simplicial_cone(fan, cone)) {
            add("non-simplicial cone " + cone_name(cone));
            continue;
        }
        cone_set.insert(cone);
    }
    if (!report.ok()) return report;

    for (const auto& cone : fan.cones) {
        const std::size_t n = cone.size();
        for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
            std::vector<int> face;
            for (std::size_t b = 0; b < n; ++b)
                if (mask & (1u << b)) face.push_back(cone[b]);
            if (!cone_set.count(face))
                add("cone set not face-closed: " + cone_name(cone) + " misses " +
                    cone_name(face));
        }
    }

    for (int b : fan.boundary_rays)
        if (b < 0 || b >= static_cast<int>(fan.rays.size()))
            add("boundary ray " + std::to_string(b + 1) + " does not exist");

    // Pairwise: relative interiors of distinct cones must not meet. With
    // face closure this pins the fan property exactly.
    for (std::size_t i = 0; i < fan.cones.size(); ++i) {
        for (std::size_t j = i + 1; j < fan.cones.size(); ++j) {
            const auto& a = fan.cones[i];
            const auto& b = fan.cones[j];
            RatMatrix eq(fan.dim, a.size() + b.size());
            for (std::size_t c = 0; c < a.size(); ++c)
                for (int r = 0; r < fan.dim; ++r)
                    eq(r, static_cast<Eigen::Index>(c)) = Rat(fan.rays[a[c]](r));
            for (std::size_t c = 0; c < b.size(); ++c)
                for (int r = 0; r < fan.dim; ++r)
                    eq(r, static_cast<Eigen::Index>(a.size() + c)) =
                        -Rat(fan.rays[b[c]](r));
            if (positive_combination_exists(eq))
                add("cones " + cone_name(a) + " and " + cone_name(b) +
                    " overlap beyond a common face");
        }
    }
    return report;
}

Fan stellar_subdivide_fan(const Fan& fan, const IntVector& new_ray) {
    if (vector_gcd(new_ray) != 1)
        throw std::invalid_argument("subdivision ray must be primitive");

    // Minimal cone holding the ray in its relative interior: scan by size.
    std::vector<int> carrier;
    {
        std::vector<std::vector<int>> by_size = fan.cones;
        std::stable_sort(by_size.begin(), by_size.end(),
                         [](const auto& a, const auto& b) {
                             return a.size() < b.size();
                         });
        for (const auto& cone : by_size) {
            auto coords = cone_coordinates(fan, cone, new_ray);
            if (!coords) continue;
            bool strict = true;
            for (Eigen::Index i = 0; i < coords->size(); ++i)
                if ((*coords)(i) <= 0) { strict = false; break; }
            if (strict) {
                carrier = cone;
                break;
            }
        }
    }
    if (carrier.empty())
        throw ValidationError(
            ValidationReport{{{"ray outside the support of the fan", {}}}});
    if (carrier.size() == 1) return fan;  // existing ray, nothing to do

    Fan out = fan;
    const int fresh = static_cast<int>(out.rays.size());
    out.rays.push_back(new_ray);

    std::set<std::vector<int>> cones;
    for (const auto& cone : fan.cones) {
        const bool in_star =
            std::includes(cone.begin(), cone.end(), carrier.begin(), carrier.end());
        if (!in_star) {
            cones.insert(cone);
            continue;
        }
        const std::size_t n = cone.size();
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            std::vector<int> face;
            for (std::size_t b = 0; b < n; ++b)
                if (mask & (1u << b)) face.push_back(cone[b]);
            if (std::includes(face.begin(), face.end(), carrier.begin(),
                              carrier.end()))
                continue;  // faces containing the carrier vanish
            face.push_back(fresh);
            std::sort(face.begin(), face.end());
            cones.insert(std::move(face));
        }
    }
    out.cones.assign(cones.begin(), cones.end());
    return canonicalize(out);
}

Fan triangulate_fan(const Fan& fan) {
    Fan out = fan;
    std::vector<std::vector<int>> replaced;
    for (const auto& cone : fan.cones) {
        if (static_cast<int>(cone.size()) <= fan.dim) {
            if (!is_simplicial_cone(fan, cone))
                throw ValidationError(ValidationReport{
                    {{"cone " + cone_name(cone) + " has dependent generators", {}}}});
            replaced.push_back(cone);
            continue;
        }
        if (fan.dim > 3)
            throw UnsupportedError(
                "non-simplicial cones are only supported in dimension <= 3");
        if (fan.dim <= 2)
            throw ValidationError(ValidationReport{
                {{"cone " + cone_name(cone) + " has too many rays for dimension " +
                      std::to_string(fan.dim),
                  {}}}});

        // Convex cyclic order check: every det(r_i, r_{i+1}, r_j) must carry
        // one strict sign.
        std::vector<int> cycle = cone;
        const int k = static_cast<int>(cycle.size());
        int sign = 0;
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                if (j == i || j == (i + 1) % k) continue;
                IntMatrix m(3, 3);
                m.col(0) = fan.rays[cycle[i]];
                m.col(1) = fan.rays[cycle[(i + 1) % k]];
                m.col(2) = fan.rays[cycle[j]];
                Int det = fraction_free_determinant<Int>(m);
                int s = det > 0 ? 1 : (det < 0 ? -1 : 0);
                if (s == 0 || (sign != 0 && s != sign))
                    throw ValidationError(ValidationReport{
                        {{"rays of cone " + cone_name(cone) +
                              " are not in convex cyclic position",
                          {}}}});
                if (sign == 0) sign = s;
            }
        }
        // Pointedness: some functional must pair >= 1 with every ray.
        // Fourier-Motzkin on the three coefficients.
        {
            struct Row {
                std::vector<Rat> coef;
                Rat rhs;
            };
            std::vector<Row> rows;
            for (int idx : cycle) {
                Row row;
                row.coef = {Rat(fan.rays[idx](0)), Rat(fan.rays[idx](1)),
                            Rat(fan.rays[idx](2))};
                row.rhs = Rat(1);
                rows.push_back(std::move(row));
            }
            for (int var = 0; var < 3; ++var) {
                std::vector<Row> pos, neg, zero;
                for (auto& row : rows) {
                    if (row.coef[var] > 0) pos.push_back(std::move(row));
                    else if (row.coef[var] < 0) neg.push_back(std::move(row));
                    else zero.push_back(std::move(row));
                }
                rows = std::move(zero);
                for (const Row& p : pos)
                    for (const Row& n : neg) {
                        Row combined;
                        combined.coef.assign(3, Rat(0));
                        Rat a = -n.coef[var], b = p.coef[var];
                        for (int j = 0; j < 3; ++j)
                            combined.coef[j] = a * p.coef[j] + b * n.coef[j];
                        combined.rhs = a * p.rhs + b * n.rhs;
                        rows.push_back(std::move(combined));
                    }
            }
            bool feasible = true;
            for (const Row& row : rows)
                if (row.rhs > 0) feasible = false;
            if (!feasible)
                throw ValidationError(ValidationReport{
                    {{"cone " + cone_name(cone) + " is not pointed", {}}}});
        }
        for (int i = 1; i + 1 < k; ++i)
            replaced.push_back({cycle[0], cycle[i], cycle[i + 1]});
    }
    out.cones = std::move(replaced);
    return canonicalize(out);
}

std::vector<IntVector> parallelepiped_points(const Fan& fan,
                                             const std::vector<int>& cone) {
    IntMatrix g = ray_matrix(fan, cone);
    const Eigen::Index k = g.cols();
    SnfResult snf = smith_normal_form(g);
    std::vector<Int> diag;
    for (Eigen::Index i = 0; i < k; ++i) {
        if (snf.d(i, i) == 0)
            throw std::invalid_argument("dependent cone generators");
        diag.push_back(snf.d(i, i));
    }
    Int order = 1;
    for (const Int& d : diag) order *= d;
    if (order > 1000000)
        throw UnsupportedError("cone multiplicity too large to enumerate (" +
                               order.str() + ")");

    std::vector<IntVector> points;
    std::vector<Int> t(static_cast<std::size_t>(k), Int(0));
    for (;;) {
        // advance odometer; skip the zero class
        bool all_zero = true;
        for (const Int& x : t)
            if (x != 0) all_zero = false;
        if (!all_zero) {
            // c = v * (t_i / d_i), fractional parts give the representative
            RatVector c = RatVector::Zero(k);
            for (Eigen::Index row = 0; row < k; ++row) {
                Rat acc(0);
                for (Eigen::Index i = 0; i < k; ++i)
                    acc += Rat(snf.v(row, i)) * Rat(t[static_cast<std::size_t>(i)], diag[static_cast<std::size_t>(i)]);
                c(row) = acc - Rat(rat_floor(acc));
            }
            RatVector q = RatVector::Zero(g.rows());
            for (Eigen::Index row = 0; row < g.rows(); ++row) {
                Rat acc(0);
                for (Eigen::Index i = 0; i < k; ++i) acc += Rat(g(row, i)) * c(i);
                q(row) = acc;
            }
            IntVector point(g.rows());
            bool zero = true;
            for (Eigen::Index row = 0; row < g.rows(); ++row) {
                if (boost::multiprecision::denominator(q(row)) != 1)
                    throw std::logic_error("parallelepiped point not integral");
                point(row) = boost::multiprecision::numerator(q(row));
                if (point(row) != 0) zero = false;
            }
            if (!zero) points.push_back(std::move(point));
        }
        Eigen::Index pos = 0;
        while (pos < k) {
            t[static_cast<std::size_t>(pos)] += 1;
            if (t[static_cast<std::size_t>(pos)] < diag[static_cast<std::size_t>(pos)]) break;
            t[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == k) break;
    }
    return points;
}

IntVector select_subdivision_point(const Fan& fan, const std::vector<int>& cone) {
    std::vector<IntVector> points = parallelepiped_points(fan, cone);
    if (points.empty())
        throw std::invalid_argument("cone is smooth, nothing to subdivide");

    const IntVector* best = nullptr;
    Rat best_score;
    auto lex_less = [](const IntVector& a, const IntVector& b) {
        for (Eigen::Index i = 0; i < a.size(); ++i)
            if (a(i) != b(i)) return a(i) < b(i);
        return false;
    };
    for (const IntVector& p : points) {
        auto coords = cone_coordinates(fan, cone, p);
        Rat score(0);
        for (Eigen::Index i = 0; i < coords->size(); ++i) {
            Rat c = (*coords)(i);
            score += c - Rat(rat_floor(c));
        }
        if (!best || score < best_score ||
            (score == best_score && lex_less(p, *best))) {
            best = &p;
            best_score = score;
        }
    }
    if (vector_gcd(*best) != 1)
        throw std::logic_error("selected subdivision point is not primitive");
    return *best;
}

Fan resolve_fan(const Fan& fan, ResolveTrace* trace) {
    Fan current = canonicalize(triangulate_fan(fan));
    for (;;) {
        std::vector<Int> before = multiplicity_multiset(current);

        // canonical target: maximal multiplicity, then smallest, then lex
        const std::vector<int>* target = nullptr;
        Int target_mult = 1;
        for (const auto& cone : current.cones) {
            Int m = cone_multiplicity(current, cone);
            if (m <= 1) continue;
            if (!target || m > target_mult ||
                (m == target_mult && (cone.size() < target->size() ||
                                      (cone.size() == target->size() && cone < *target)))) {
                target = &cone;
                target_mult = m;
            }
        }
        if (!target) break;

        std::vector<int> target_cone = *target;
        IntVector point = select_subdivision_point(current, target_cone);
        current = stellar_subdivide_fan(current, point);

        std::vector<Int> after = multiplicity_multiset(current);
        if (!multiset_less(after, before))
            throw std::logic_error(
                "multiplicity multiset failed to decrease at " +
                cone_name(target_cone));
        if (trace)
            trace->steps.push_back(
                ResolveStep{target_cone, point, before, after});
    }
    return current;
}

namespace {

DeltaComplex complex_from_cones(const Fan& fan,
                                const std::vector<std::vector<int>>& cones) {
    DeltaComplex complex;
    complex.num_divisors = static_cast<int>(fan.rays.size());
    complex.ambient_dim = fan.dim;

    std::vector<std::vector<int>> sorted = cones;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) {
                         if (a.size() != b.size()) return a.size() < b.size();
                         return a < b;
                     });
    std::map<std::vector<int>, CellId> ids;
    for (const auto& cone : sorted) {
        const int d = static_cast<int>(cone.size()) - 1;
        if (d >= static_cast<int>(complex.cells.size())) complex.cells.resize(d + 1);
        CellId id{d, static_cast<int>(complex.cells[d].size())};
        Cell cell;
        for (int idx : cone) cell.labels.push_back(idx + 1);
        cell.component = 1;
        complex.cells[d].push_back(std::move(cell));
        ids[cone] = id;
    }
    for (const auto& cone : sorted) {
        if (cone.size() <= 1) continue;
        Cell& cell = complex.cells[cone.size() - 1][ids.at(cone).index];
        for (std::size_t s = 0; s < cone.size(); ++s) {
            std::vector<int> face = cone;
            face.erase(face.begin() + static_cast<std::ptrdiff_t>(s));
            cell.facets.push_back(ids.at(face));
        }
    }
    return complex;
}

}  // namespace

DeltaComplex cross_section_complex(const Fan& fan) {
    Fan canonical = canonicalize(fan);
    for (const auto& cone : canonical.cones)
        if (!is_simplicial_cone(canonical, cone))
            throw ValidationError(ValidationReport{
                {{"non-simplicial cone present: " + cone_name(cone), {}}}});
    return complex_from_cones(canonical, canonical.cones);
}

DeltaComplex interior_complex(const Fan& fan,
                              const std::optional<std::set<int>>& boundary) {
    const std::set<int>& del = boundary ? *boundary : fan.boundary_rays;
    for (int b : del)
        if (b < 0 || b >= static_cast<int>(fan.rays.size()))
            throw std::out_of_range("unknown ray " + std::to_string(b + 1) +
                                    " in boundary set");
    Fan canonical = canonicalize(fan);
    std::vector<std::vector<int>> kept;
    for (const auto& cone : canonical.cones) {
        bool touches = false;
        for (int idx : cone)
            if (del.count(idx)) touches = true;
        if (!touches) kept.push_back(cone);
    }
    return complex_from_cones(canonical, kept);
}

bool verify_refinement_support(const Fan& input, const Fan& refined) {
    Fan base = canonicalize(input);
    Fan fine = canonicalize(refined);
    for (const auto& cone : base.cones)
        if (!is_simplicial_cone(base, cone)) return false;

    auto maximal_cones = [](const Fan& fan) {
        std::vector<std::vector<int>> max;
        for (const auto& cone : fan.cones) {
            bool proper_face = false;
            for (const auto& other : fan.cones)
                if (other.size() > cone.size() &&
                    std::includes(other.begin(), other.end(), cone.begin(),
                                  cone.end()))
                    proper_face = true;
            if (!proper_face) max.push_back(cone);
        }
        return max;
    };
    std::vector<std::vector<int>> base_max = maximal_cones(base);
    std::vector<std::vector<int>> fine_max = maximal_cones(fine);

    std::vector<Rat> base_total(base_max.size(), Rat(0));
    // index of the projection rows per base cone, chosen once
    struct Frame {
        std::vector<int> rows;
        RatVector functional;  // restricted to rows
    };
    std::vector<Frame> frames;
    for (const auto& cone : base_max) {
        IntMatrix g = ray_matrix(base, cone);
        const int k = static_cast<int>(cone.size());
        // choose k independent rows by rational elimination
        RatMatrix work(g.cols(), g.rows());
        for (Eigen::Index i = 0; i < g.rows(); ++i)
            for (Eigen::Index j = 0; j < g.cols(); ++j) work(j, i) = Rat(g(i, j));
        std::vector<int> rows = rref(work);  // pivot columns of g^T = rows of g
        if (static_cast<int>(rows.size()) != k) return false;
        // functional a with <a, ray_i> = 1, supported on the chosen rows
        RatMatrix sys(k, k + 1);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) sys(i, j) = Rat(g(rows[j], i));
            sys(i, k) = Rat(1);
        }
        std::vector<int> piv = rref(sys);
        if (static_cast<int>(piv.size()) != k) return false;
        RatVector a = RatVector::Zero(k);
        for (int i = 0; i < k; ++i) a(i) = sys(i, k);
        frames.push_back(Frame{rows, a});
    }

    auto cone_contains = [](const Fan& fan_ref, const std::vector<int>& cone,
                            const IntVector& point) {
        auto coords = cone_coordinates(fan_ref, cone, point);
        if (!coords) return false;
        for (Eigen::Index i = 0; i < coords->size(); ++i)
            if ((*coords)(i) < 0) return false;
        return true;
    };

    for (const auto& piece : fine_max) {
        bool assigned = false;
        for (std::size_t b = 0; b < base_max.size(); ++b) {
            bool inside = true;
            for (int idx : piece)
                if (!cone_contains(base, base_max[b], fine.rays[idx]))
                    inside = false;
            if (!inside) continue;
            assigned = true;
            const Frame& frame = frames[b];
            if (piece.size() != base_max[b].size()) return false;
            const int k = static_cast<int>(piece.size());
            RatMatrix proj(k, k);
            Rat denom(1);
            for (int j = 0; j < k; ++j) {
                const IntVector& ray = fine.rays[piece[j]];
                Rat pairing(0);
                for (int i = 0; i < k; ++i) {
                    proj(i, j) = Rat(ray(frame.rows[i]));
                    pairing += frame.functional(i) * Rat(ray(frame.rows[i]));
                }
                if (pairing <= 0) return false;
                denom *= pairing;
            }
            Rat det = fraction_free_determinant<Rat>(proj);
            if (det < 0) det = -det;
            base_total[b] += det / denom;
        }
        if (!assigned) return false;
    }

    for (std::size_t b = 0; b < base_max.size(); ++b) {
        const Frame& frame = frames[b];
        const auto& cone = base_max[b];
        const int k = static_cast<int>(cone.size());
        RatMatrix proj(k, k);
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < k; ++i)
                proj(i, j) = Rat(base.rays[cone[j]](frame.rows[i]));
        Rat det = fraction_free_determinant<Rat>(proj);
        if (det < 0) det = -det;
        if (base_total[b] != det) return false;  // product of pairings is 1
    }
    return true;
}

Fan parse_fan(std::string_view text) {
    Fan fan;
    bool have_header = false, have_dim = false, have_boundary = false;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::string line(text.substr(start, end == std::string_view::npos
                                                ? std::string_view::npos
                                                : end - start));
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream is(line);
        std::string head;
        if (is >> head) {
            if (head == "fan") {
                if (!(is >> fan.name)) throw ParseError(line_no, 1, "fan needs a name");
                have_header = true;
            } else if (head == "dim") {
                if (!(is >> fan.dim) || fan.dim < 1)
                    throw ParseError(line_no, 1, "dim needs a positive integer");
                have_dim = true;
            } else if (head == "ray") {
                if (!have_dim) throw ParseError(line_no, 1, "ray before dim");
                IntVector r(fan.dim);
                for (int i = 0; i < fan.dim; ++i) {
                    long long x;
                    if (!(is >> x))
                        throw ParseError(line_no, 1, "ray needs " +
                                                          std::to_string(fan.dim) +
                                                          " integers");
                    r(i) = x;
                }
                fan.rays.push_back(std::move(r));
            } else if (head == "cone") {
                std::vector<int> cone;
                int idx;
                while (is >> idx) {
                    if (idx < 1 || idx > static_cast<int>(fan.rays.size()))
                        throw ParseError(line_no, 1,
                                         "cone references missing ray " +
                                             std::to_string(idx));
                    cone.push_back(idx - 1);
                }
                if (cone.empty()) throw ParseError(line_no, 1, "empty cone line");
                fan.cones.push_back(std::move(cone));
            } else if (head == "boundary") {
                have_boundary = true;
                int idx;
                while (is >> idx) {
                    if (idx < 1 || idx > static_cast<int>(fan.rays.size()))
                        throw ParseError(line_no, 1,
                                         "boundary references missing ray " +
                                             std::to_string(idx));
                    fan.boundary_rays.insert(idx - 1);
                }
            } else {
                throw ParseError(line_no, 1, "unknown directive '" + head + "'");
            }
            std::string rest;
            if (is >> rest)
                throw ParseError(line_no, 1, "trailing input '" + rest + "'");
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    if (!have_header) throw ParseError(1, 1, "expected 'fan <name>'");
    if (!have_dim) throw ParseError(1, 1, "expected 'dim <n>'");
    // Without an explicit boundary line all file rays are boundary: for a
    // single-cone file these are exactly the extreme rays of the cone.
    if (!have_boundary)
        for (int i = 0; i < static_cast<int>(fan.rays.size()); ++i)
            fan.boundary_rays.insert(i);
    return fan;
}

std::string serialize_fan(const Fan& fan) {
    std::ostringstream os;
    os << "fan " << fan.name << "\n";
    os << "dim " << fan.dim << "\n";
    for (const IntVector& r : fan.rays) {
        os << "ray";
        for (Eigen::Index i = 0; i < r.size(); ++i) os << " " << r(i);
        os << "\n";
    }
    // maximal cones only; parsing plus canonicalization restores the rest
    for (std::size_t i = 0; i < fan.cones.size(); ++i) {
        const auto& cone = fan.cones[i];
        bool maximal = true;
        if (static_cast<int>(cone.size()) <= fan.dim &&
            std::is_sorted(cone.begin(), cone.end())) {
            for (const auto& other : fan.cones) {
                if (other.size() > cone.size() &&
                    std::is_sorted(other.begin(), other.end()) &&
                    std::includes(other.begin(), other.end(), cone.begin(),
                                  cone.end()))
                    maximal = false;
            }
        }
        if (!maximal) continue;
        os << "cone";
        for (int idx : cone) os << " " << idx + 1;
        os << "\n";
    }
    if (!fan.boundary_rays.empty()) {
        os << "boundary";
        for (int idx : fan.boundary_rays) os << " " << idx + 1;
        os << "\n";
    }
    return os.str();
}

}  // namespace dualcx
