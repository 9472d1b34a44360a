#include "dualcx/delta_complex.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dualcx {

std::string to_string(const CellId& id) {
    return std::to_string(id.dim) + ":" + std::to_string(id.index);
}

int DeltaComplex::dimension() const {
    for (int d = static_cast<int>(cells.size()) - 1; d >= 0; --d)
        if (!cells[d].empty()) return d;
    return -1;
}

std::size_t DeltaComplex::total_cells() const {
    std::size_t n = 0;
    for (const auto& layer : cells) n += layer.size();
    return n;
}

bool DeltaComplex::has_cell(CellId id) const {
    return id.dim >= 0 && id.dim < static_cast<int>(cells.size()) &&
           id.index >= 0 && id.index < static_cast<int>(cells[id.dim].size());
}

const Cell& DeltaComplex::cell(CellId id) const {
    if (!has_cell(id))
        throw std::out_of_range("unknown cell " + to_string(id));
    return cells[id.dim][id.index];
}

std::size_t DeltaComplex::count(int dim) const {
    if (dim < 0 || dim >= static_cast<int>(cells.size())) return 0;
    return cells[dim].size();
}

std::optional<CellId> DeltaComplex::find_vertex(int label) const {
    if (cells.empty()) return std::nullopt;
    for (int i = 0; i < static_cast<int>(cells[0].size()); ++i)
        if (cells[0][i].labels[0] == label) return CellId{0, i};
    return std::nullopt;
}

std::vector<CellId> DeltaComplex::all_cells() const {
    std::vector<CellId> out;
    out.reserve(total_cells());
    for (int d = 0; d < static_cast<int>(cells.size()); ++d)
        for (int i = 0; i < static_cast<int>(cells[d].size()); ++i)
            out.push_back(CellId{d, i});
    return out;
}

std::string ValidationReport::to_string() const {
    if (violations.empty()) return "valid";
    std::ostringstream os;
    os << violations.size() << " violation(s):";
    for (const auto& v : violations) {
        os << "\n  - " << v.message;
        if (!v.cells.empty()) {
            os << " [";
            for (std::size_t i = 0; i < v.cells.size(); ++i) {
                if (i) os << ", ";
                os << dualcx::to_string(v.cells[i]);
            }
            os << "]";
        }
    }
    return os.str();
}

namespace {

std::string label_string(const std::vector<int>& labels) {
    std::string s = "{";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) s += " ";
        s += std::to_string(labels[i]);
    }
    return s + "}";
}

}  // namespace

ValidationReport validate(const DeltaComplex& complex) {
    ValidationReport report;
    auto add = [&report](std::string msg, std::vector<CellId> ids = {}) {
        report.violations.push_back({std::move(msg), std::move(ids)});
    };

    // Vertex uniqueness per divisor label.
    std::map<int, std::vector<CellId>> vertices_by_label;
    if (!complex.cells.empty()) {
        for (int i = 0; i < static_cast<int>(complex.cells[0].size()); ++i) {
            const Cell& v = complex.cells[0][i];
            if (v.labels.size() == 1)
                vertices_by_label[v.labels[0]].push_back(CellId{0, i});
        }
        for (const auto& [label, ids] : vertices_by_label)
            if (ids.size() > 1)
                add("duplicate vertex for divisor " + std::to_string(label), ids);
    }

    std::set<int> labels_seen;
    std::map<std::pair<std::vector<int>, int>, std::vector<CellId>> by_key;

    for (int d = 0; d < static_cast<int>(complex.cells.size()); ++d) {
        for (int i = 0; i < static_cast<int>(complex.cells[d].size()); ++i) {
            const CellId id{d, i};
            const Cell& c = complex.cells[d][i];
            if (static_cast<int>(c.labels.size()) != d + 1) {
                add("cell has " + std::to_string(c.labels.size()) +
                        " labels but dimension " + std::to_string(d),
                    {id});
                continue;
            }
            bool increasing = true;
            for (std::size_t s = 0; s + 1 < c.labels.size(); ++s)
                if (c.labels[s] >= c.labels[s + 1]) increasing = false;
            if (!increasing) {
                add("labels not strictly increasing", {id});
                continue;
            }
            for (int lab : c.labels) {
                labels_seen.insert(lab);
                if (lab < 1 || lab > complex.num_divisors)
                    add("label " + std::to_string(lab) + " outside 1.." +
                            std::to_string(complex.num_divisors),
                        {id});
            }
            if (c.component < 1)
                add("component index must be positive", {id});
            by_key[{c.labels, c.component}].push_back(id);
            if (complex.ambient_dim && d > *complex.ambient_dim - 1)
                add("cell dimension exceeds ambient bound " +
                        std::to_string(*complex.ambient_dim - 1),
                    {id});

            if (static_cast<int>(c.facets.size()) != (d == 0 ? 0 : d + 1)) {
                add("facet list has wrong length", {id});
                continue;
            }
            bool facets_ok = true;
            for (int s = 0; s <= d && d > 0; ++s) {
                CellId f = c.facets[s];
                if (!complex.has_cell(f) || f.dim != d - 1) {
                    add("facet " + std::to_string(s) + " does not resolve", {id});
                    facets_ok = false;
                    continue;
                }
                std::vector<int> expect = c.labels;
                expect.erase(expect.begin() + s);
                if (complex.cell(f).labels != expect) {
                    add("facet " + std::to_string(s) + " has labels " +
                            label_string(complex.cell(f).labels) + ", expected " +
                            label_string(expect),
                        {id, f});
                    facets_ok = false;
                }
            }
            // Pairwise facet compatibility: deleting labels at positions s < t
            // in either order must land on the same cell.
            if (facets_ok && d >= 2) {
                for (int t = 0; t <= d; ++t) {
                    for (int s = 0; s < t; ++s) {
                        CellId a = complex.cell(c.facets[t]).facets[s];
                        CellId b = complex.cell(c.facets[s]).facets[t - 1];
                        if (a != b)
                            add("facet compatibility fails at positions (" +
                                    std::to_string(s) + "," + std::to_string(t) + ")",
                                {id, a, b});
                    }
                }
            }
        }
    }

    for (const auto& [key, ids] : by_key)
        if (ids.size() > 1)
            add("duplicate (labels, component) pair " + label_string(key.first) +
                    "^" + std::to_string(key.second),
                ids);

    // Every label used by a higher cell needs its vertex.
    for (int lab : labels_seen)
        if (lab >= 1 && lab <= complex.num_divisors &&
            vertices_by_label.find(lab) == vertices_by_label.end())
            add("divisor " + std::to_string(lab) + " appears but has no vertex");

    return report;
}

std::vector<std::size_t> f_vector(const DeltaComplex& complex) {
    std::vector<std::size_t> f;
    int dim = complex.dimension();
    for (int d = 0; d <= dim; ++d) f.push_back(complex.count(d));
    return f;
}

long long euler_characteristic(const DeltaComplex& complex) {
    long long chi = 0;
    int sign = 1;
    for (std::size_t n : f_vector(complex)) {
        chi += sign * static_cast<long long>(n);
        sign = -sign;
    }
    return chi;
}

ComponentPartition connected_components(const DeltaComplex& complex) {
    ComponentPartition part;
    const int n = static_cast<int>(complex.count(0));
    part.component_of_vertex.assign(n, -1);

    // Union-find over vertex indices, edges from the 1-skeleton.
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&parent](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (int e = 0; e < static_cast<int>(complex.count(1)); ++e) {
        const Cell& edge = complex.cells[1][e];
        int a = find(edge.facets[0].index);
        int b = find(edge.facets[1].index);
        if (a != b) parent[a] = b;
    }
    std::map<int, int> roots;
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        auto [it, fresh] = roots.try_emplace(r, part.count);
        if (fresh) ++part.count;
        part.component_of_vertex[i] = it->second;
    }
    return part;
}

std::vector<CellId> cofaces(const DeltaComplex& complex, CellId cell) {
    if (!complex.has_cell(cell))
        throw std::out_of_range("unknown cell " + to_string(cell));
    std::set<CellId> result{cell};
    // Walk upward one dimension at a time: a (d+1)-cell is a coface iff one
    // of its facets already is.
    for (int d = cell.dim; d + 1 <= complex.dimension(); ++d) {
        for (int i = 0; i < static_cast<int>(complex.count(d + 1)); ++i) {
            const Cell& c = complex.cells[d + 1][i];
            for (const CellId& f : c.facets) {
                if (f.dim == d && result.count(f)) {
                    result.insert(CellId{d + 1, i});
                    break;
                }
            }
        }
    }
    return {result.begin(), result.end()};
}

CellId iterated_face(const DeltaComplex& complex, CellId cell,
                     const std::vector<int>& labels_to_delete) {
    CellId cur = cell;
    std::vector<int> to_delete = labels_to_delete;
    std::sort(to_delete.begin(), to_delete.end());
    // Delete from the highest label down; positions of smaller labels stay put.
    for (auto it = to_delete.rbegin(); it != to_delete.rend(); ++it) {
        const Cell& c = complex.cell(cur);
        auto pos = std::lower_bound(c.labels.begin(), c.labels.end(), *it);
        if (pos == c.labels.end() || *pos != *it)
            throw std::invalid_argument("label " + std::to_string(*it) +
                                        " not present in cell " + to_string(cur));
        cur = c.facets[pos - c.labels.begin()];
    }
    return cur;
}

DeltaComplex relabel_divisors(const DeltaComplex& complex,
                              const std::map<int, int>& relabeling,
                              int new_num_divisors) {
    int prev = 0;
    for (const auto& [from, to] : relabeling) {
        if (to <= prev)
            throw std::invalid_argument("relabeling must be order-preserving");
        prev = to;
    }
    DeltaComplex out = complex;
    out.num_divisors = new_num_divisors;
    for (auto& layer : out.cells)
        for (auto& c : layer)
            for (auto& lab : c.labels) lab = relabeling.at(lab);
    return out;
}

namespace {

int sort_parity(const std::vector<int>& seq) {
    int inversions = 0;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            if (seq[i] > seq[j]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace

ValidationReport validate(const DeltaMap& map) {
    ValidationReport report;
    auto add = [&report](std::string msg, std::vector<CellId> ids = {}) {
        report.violations.push_back({std::move(msg), std::move(ids)});
    };

    const DeltaComplex& src = map.source;
    const DeltaComplex& tgt = map.target;

    for (int i = 0; i < static_cast<int>(src.count(0)); ++i) {
        int lab = src.cells[0][i].labels[0];
        auto it = map.vertex_assignment.find(lab);
        if (it == map.vertex_assignment.end())
            add("vertex label " + std::to_string(lab) + " unassigned", {CellId{0, i}});
        else if (!tgt.find_vertex(it->second))
            add("vertex label " + std::to_string(lab) + " maps to missing target vertex " +
                    std::to_string(it->second),
                {CellId{0, i}});
    }
    if (!report.ok()) return report;

    if (map.cell_assignment.size() < src.cells.size()) {
        add("cell assignment missing dimensions");
        return report;
    }
    for (int d = 0; d < static_cast<int>(src.cells.size()); ++d)
        if (map.cell_assignment[d].size() < src.cells[d].size()) {
            add("cell assignment incomplete in dimension " + std::to_string(d));
            return report;
        }

    for (int d = 0; d < static_cast<int>(src.cells.size()); ++d) {
        for (int i = 0; i < static_cast<int>(src.cells[d].size()); ++i) {
            const CellId id{d, i};
            const Cell& c = src.cells[d][i];
            std::vector<int> image;
            image.reserve(c.labels.size());
            for (int lab : c.labels) image.push_back(map.vertex_assignment.at(lab));
            std::vector<int> sorted_image = image;
            std::sort(sorted_image.begin(), sorted_image.end());
            bool injective =
                std::adjacent_find(sorted_image.begin(), sorted_image.end()) ==
                sorted_image.end();

            const auto& assignment = map.cell_assignment[d][i];
            if (!assignment.has_value()) {
                if (injective)
                    add("cell marked DEGENERATE but labels map injectively", {id});
                continue;
            }
            if (!injective) {
                add("cell with collapsed labels must be DEGENERATE", {id});
                continue;
            }
            if (!tgt.has_cell(*assignment) || assignment->dim != d) {
                add("image cell missing or of wrong dimension", {id});
                continue;
            }
            const Cell& t = tgt.cell(*assignment);
            if (t.labels != sorted_image) {
                add("image labels disagree with vertex assignment", {id, *assignment});
                continue;
            }
            // Facet compatibility: face s of c must map onto the face of the
            // image cell that omits the image of label s.
            if (d >= 1) {
                for (int s = 0; s <= d; ++s) {
                    int image_pos = static_cast<int>(
                        std::lower_bound(sorted_image.begin(), sorted_image.end(),
                                         image[s]) -
                        sorted_image.begin());
                    CellId f = c.facets[s];
                    const auto& fa = map.cell_assignment[f.dim][f.index];
                    if (!fa.has_value()) {
                        add("facet of non-degenerate cell marked DEGENERATE", {id, f});
                        continue;
                    }
                    if (*fa != t.facets[image_pos])
                        add("facet assignment incompatible at position " +
                                std::to_string(s),
                            {id, f});
                }
            }
        }
    }
    return report;
}

namespace detail {

IntMatrix build_chain_map_unchecked(const DeltaMap& map, int k) {
    const Eigen::Index rows = static_cast<Eigen::Index>(map.target.count(k));
    const Eigen::Index cols = static_cast<Eigen::Index>(map.source.count(k));
    IntMatrix m = IntMatrix::Zero(rows, cols);
    if (k < 0) return m;
    for (Eigen::Index i = 0; i < cols; ++i) {
        const auto& assignment = map.cell_assignment[k][static_cast<std::size_t>(i)];
        if (!assignment.has_value()) continue;
        const Cell& c = map.source.cells[k][static_cast<std::size_t>(i)];
        std::vector<int> image;
        image.reserve(c.labels.size());
        for (int lab : c.labels) image.push_back(map.vertex_assignment.at(lab));
        m(assignment->index, i) = sort_parity(image);
    }
    return m;
}

}  // namespace detail

IntMatrix build_chain_map(const DeltaMap& map, int k) {
    ValidationReport report = validate(map);
    if (!report.ok()) throw ValidationError(std::move(report));
    return detail::build_chain_map_unchecked(map, k);
}

}  // namespace dualcx
