#include "dualcx/blowup.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "dualcx/rng.hpp"
#include "dualcx/snc_config.hpp"  // ParseError

namespace dualcx {

namespace {

bool contains_label(const Cell& cell, int label) {
    return std::binary_search(cell.labels.begin(), cell.labels.end(), label);
}

int label_position(const Cell& cell, int label) {
    return static_cast<int>(
        std::lower_bound(cell.labels.begin(), cell.labels.end(), label) -
        cell.labels.begin());
}

}  // namespace

std::vector<CellId> face_closure(const DeltaComplex& complex,
                                 const std::vector<CellId>& generators) {
    std::set<CellId> closed;
    std::vector<CellId> stack = generators;
    while (!stack.empty()) {
        CellId id = stack.back();
        stack.pop_back();
        if (!closed.insert(id).second) continue;
        for (const CellId& f : complex.cell(id).facets) stack.push_back(f);
    }
    return {closed.begin(), closed.end()};
}

ValidationReport validate_center(const DeltaComplex& complex,
                                 const BlowupCenter& center) {
    ValidationReport report;
    auto add = [&report](std::string msg, std::vector<CellId> ids = {}) {
        report.violations.push_back({std::move(msg), std::move(ids)});
    };

    if (center.case_tag != 1 && center.case_tag != 2) {
        add("case tag must be 1 or 2");
        return report;
    }
    if (!complex.has_cell(center.carrier)) {
        add("carrier cell does not exist", {center.carrier});
        return report;
    }
    if (center.case_tag == 1) return report;

    std::set<CellId> incidence;
    for (const CellId& id : center.incidence) {
        if (!complex.has_cell(id)) {
            add("incidence cell does not exist", {id});
            return report;
        }
        incidence.insert(id);
    }
    if (incidence.empty()) {
        add("incidence set is empty");
        return report;
    }
    if (!incidence.count(center.carrier))
        add("carrier not in incidence", {center.carrier});

    const int v = center.contraction_vertex;
    if (!contains_label(complex.cell(center.carrier), v))
        add("contraction vertex " + std::to_string(v) + " not on carrier",
            {center.carrier});

    for (const CellId& m : incidence)
        for (const CellId& f : complex.cell(m).facets)
            if (!incidence.count(f)) add("incidence not face-closed", {m, f});

    for (const auto& [key, target] : center.absorption)
        if (!incidence.count(key))
            add("absorption key not in incidence", {key});

    for (const CellId& m : incidence) {
        const Cell& cell = complex.cell(m);
        if (contains_label(cell, v)) {
            if (center.absorption.count(m))
                add("absorption assigned to cell containing v", {m});
            continue;
        }
        auto it = center.absorption.find(m);
        if (it == center.absorption.end()) {
            add("missing absorption for cell", {m});
            continue;
        }
        const CellId a = it->second;
        if (!incidence.count(a)) {
            add("absorption target not in incidence", {m, a});
            continue;
        }
        std::vector<int> expect = cell.labels;
        expect.insert(
            std::lower_bound(expect.begin(), expect.end(), v), v);
        const Cell& target = complex.cell(a);
        if (target.labels != expect) {
            add("absorption target has wrong labels", {m, a});
            continue;
        }
        if (target.facets[label_position(target, v)] != m)
            add("cell is not the v-facet of its absorption target", {m, a});
    }

    // Chain compatibility: for every incidence cell w containing v, the cone
    // over its v-drop must be absorbed back into w, otherwise the contraction
    // fails to commute with the boundary.
    for (const CellId& w : incidence) {
        const Cell& cell = complex.cell(w);
        if (cell.dimension() < 1 || !contains_label(cell, v)) continue;
        CellId b = cell.facets[label_position(cell, v)];
        auto it = center.absorption.find(b);
        if (it != center.absorption.end() && it->second != w)
            add("contraction not chain-compatible: v-drop of " + to_string(w) +
                    " is absorbed into " + to_string(it->second),
                {b, it->second, w});
    }
    return report;
}

MoveResult apply_case1(const DeltaComplex& complex, CellId carrier) {
    const Cell& carrier_cell = complex.cell(carrier);  // throws if unknown
    const std::vector<CellId> star = cofaces(complex, carrier);
    const std::set<CellId> star_set(star.begin(), star.end());
    const std::vector<int>& s_labels = carrier_cell.labels;
    const int s_size = static_cast<int>(s_labels.size());
    const int fresh = complex.num_divisors + 1;

    DeltaComplex out;
    out.num_divisors = fresh;
    out.ambient_dim = complex.ambient_dim;
    out.cells.resize(complex.cells.size());

    // Survivors keep their relative order; the star is upward closed, so
    // facets of survivors are survivors.
    std::map<CellId, CellId> remap;
    for (int d = 0; d < static_cast<int>(complex.cells.size()); ++d) {
        for (int i = 0; i < static_cast<int>(complex.cells[d].size()); ++i) {
            CellId id{d, i};
            if (star_set.count(id)) continue;
            remap[id] = CellId{d, static_cast<int>(out.cells[d].size())};
            out.cells[d].push_back(complex.cells[d][i]);
        }
    }
    for (auto& layer : out.cells)
        for (auto& cell : layer)
            for (auto& f : cell.facets) f = remap.at(f);

    // New cells are indexed by (coface tau, proper subset A of the carrier's
    // labels); the cell keeps A, the tail of tau, and the fresh vertex.
    struct NewCell {
        CellId tau;
        std::uint32_t mask;
    };
    std::map<std::pair<CellId, std::uint32_t>, CellId> ids;
    std::vector<std::pair<NewCell, CellId>> agenda;
    std::map<std::vector<int>, int> component_count;
    const std::uint32_t full = (1u << s_size) - 1;

    for (const CellId& tau : star) {
        const Cell& tau_cell = complex.cell(tau);
        std::vector<int> tail;
        for (int lab : tau_cell.labels)
            if (!std::binary_search(s_labels.begin(), s_labels.end(), lab))
                tail.push_back(lab);
        for (std::uint32_t mask = 0; mask < full; ++mask) {
            std::vector<int> labels;
            for (int b = 0; b < s_size; ++b)
                if (mask & (1u << b)) labels.push_back(s_labels[b]);
            labels.insert(labels.end(), tail.begin(), tail.end());
            std::sort(labels.begin(), labels.end());
            labels.push_back(fresh);
            const int d = static_cast<int>(labels.size()) - 1;
            if (d >= static_cast<int>(out.cells.size())) out.cells.resize(d + 1);
            CellId id{d, static_cast<int>(out.cells[d].size())};
            Cell cell;
            cell.component = ++component_count[labels];
            cell.labels = std::move(labels);
            out.cells[d].push_back(std::move(cell));
            ids[{tau, mask}] = id;
            agenda.push_back({{tau, mask}, id});
        }
    }

    for (const auto& [spec, id] : agenda) {
        const Cell& tau_cell = complex.cell(spec.tau);
        Cell& cell = out.cells[id.dim][id.index];
        if (cell.dimension() == 0) continue;
        std::vector<int> deleted;  // labels of the carrier outside A
        for (int b = 0; b < s_size; ++b)
            if (!(spec.mask & (1u << b))) deleted.push_back(s_labels[b]);
        for (int p = 0; p <= cell.dimension(); ++p) {
            const int label = cell.labels[p];
            if (label == fresh) {
                cell.facets.push_back(
                    remap.at(iterated_face(complex, spec.tau, deleted)));
            } else {
                auto bit = std::lower_bound(s_labels.begin(), s_labels.end(), label);
                if (bit != s_labels.end() && *bit == label) {
                    std::uint32_t sub =
                        spec.mask & ~(1u << (bit - s_labels.begin()));
                    cell.facets.push_back(ids.at({spec.tau, sub}));
                } else {
                    CellId tau2 =
                        tau_cell.facets[label_position(tau_cell, label)];
                    cell.facets.push_back(ids.at({tau2, spec.mask}));
                }
            }
        }
    }

    return MoveResult{std::move(out), fresh, std::nullopt};
}

DeltaComplex cone_over(const DeltaComplex& complex,
                       const std::vector<CellId>& face_closed_cells) {
    std::set<CellId> members(face_closed_cells.begin(), face_closed_cells.end());
    for (const CellId& m : members)
        for (const CellId& f : complex.cell(m).facets)
            if (!members.count(f))
                throw std::invalid_argument("cone base is not face-closed");

    const int fresh = complex.num_divisors + 1;
    DeltaComplex out = complex;
    out.num_divisors = fresh;

    int max_cone_dim = 0;
    for (const CellId& m : members) max_cone_dim = std::max(max_cone_dim, m.dim + 1);
    if (static_cast<int>(out.cells.size()) <= max_cone_dim)
        out.cells.resize(max_cone_dim + 1);
    if (out.ambient_dim && *out.ambient_dim < max_cone_dim + 1)
        out.ambient_dim = max_cone_dim + 1;

    CellId fresh_vertex{0, static_cast<int>(out.cells[0].size())};
    out.cells[0].push_back(Cell{{fresh}, 1, {}});

    std::map<CellId, CellId> cone_id;
    std::map<std::vector<int>, int> component_count;
    for (const CellId& m : members) {
        const Cell& base = complex.cell(m);
        Cell cell;
        cell.labels = base.labels;
        cell.labels.push_back(fresh);
        cell.component = ++component_count[cell.labels];
        const int d = m.dim + 1;
        cone_id[m] = CellId{d, static_cast<int>(out.cells[d].size())};
        out.cells[d].push_back(std::move(cell));
    }
    for (const CellId& m : members) {
        const Cell& base = complex.cell(m);
        CellId id = cone_id.at(m);
        Cell& cell = out.cells[id.dim][id.index];
        for (int p = 0; p <= base.dimension(); ++p)
            cell.facets.push_back(m.dim == 0 ? fresh_vertex
                                             : cone_id.at(base.facets[p]));
        cell.facets.push_back(m);  // dropping the fresh vertex
    }
    return out;
}

MoveResult apply_case2(const DeltaComplex& complex, const BlowupCenter& center) {
    ValidationReport report = validate_center(complex, center);
    if (!report.ok()) throw InvalidCenterError(std::move(report));

    DeltaComplex after = cone_over(complex, center.incidence);
    const int fresh = complex.num_divisors + 1;
    const int v = center.contraction_vertex;

    DeltaMap contraction;
    contraction.vertex_assignment.clear();
    for (const Cell& vertex : after.cells[0]) {
        int lab = vertex.labels[0];
        contraction.vertex_assignment[lab] = lab == fresh ? v : lab;
    }
    contraction.cell_assignment.resize(after.cells.size());
    for (int d = 0; d < static_cast<int>(after.cells.size()); ++d)
        contraction.cell_assignment[d].resize(after.cells[d].size());

    // Old cells map to themselves: they kept their indices under coning.
    for (int d = 0; d < static_cast<int>(complex.cells.size()); ++d)
        for (int i = 0; i < static_cast<int>(complex.cells[d].size()); ++i)
            contraction.cell_assignment[d][i] = CellId{d, i};

    // Fresh vertex and cone cells. Cone cells sit after the old cells in each
    // dimension, in the (dim, index) order of their bases.
    std::optional<CellId> target_vertex = complex.find_vertex(v);
    if (!target_vertex)
        throw ValidationError(ValidationReport{
            {{"complex has no vertex for contraction label " + std::to_string(v), {}}}});
    std::set<CellId> members(center.incidence.begin(), center.incidence.end());
    std::vector<int> next_index(after.cells.size());
    for (int d = 0; d < static_cast<int>(complex.cells.size()); ++d)
        next_index[d] = static_cast<int>(complex.cells[d].size());
    contraction.cell_assignment[0][next_index[0]++] = *target_vertex;
    for (const CellId& m : members) {
        CellId cone{m.dim + 1, next_index[m.dim + 1]++};
        if (contains_label(complex.cell(m), v))
            contraction.cell_assignment[cone.dim][cone.index] = std::nullopt;
        else
            contraction.cell_assignment[cone.dim][cone.index] =
                center.absorption.at(m);
    }
    contraction.source = after;
    contraction.target = complex;

    return MoveResult{std::move(after), fresh, std::move(contraction)};
}

BlowupCenter random_center(const DeltaComplex& complex, std::uint64_t seed,
                           CaseWeights weights) {
    Rng rng(seed);
    unsigned total = weights.case1 + weights.case2;
    if (total == 0) total = 1;
    const std::vector<CellId> all = complex.all_cells();
    if (all.empty()) throw std::invalid_argument("complex is empty");

    if (rng.below(total) < weights.case1) {
        BlowupCenter center;
        center.case_tag = 1;
        center.carrier = all[rng.below(all.size())];
        return center;
    }

    const int n0 = static_cast<int>(complex.count(0));
    const int v = complex.cells[0][rng.below(n0)].labels[0];
    std::vector<CellId> with_v;
    for (const CellId& id : all)
        if (contains_label(complex.cell(id), v)) with_v.push_back(id);

    for (int attempt = 0;; ++attempt) {
        std::size_t want = 1 + rng.below(3);
        if (attempt >= 3) want = 1;
        want = std::min(want, with_v.size());
        std::set<CellId> generators;
        while (generators.size() < want)
            generators.insert(with_v[rng.below(with_v.size())]);
        std::vector<CellId> closure = face_closure(
            complex, std::vector<CellId>(generators.begin(), generators.end()));

        // The absorption map must be the inverse of dropping v; two distinct
        // v-cells over the same base make the set unusable, so retry smaller.
        std::map<CellId, CellId> absorption;
        bool ok = true;
        for (const CellId& w : closure) {
            const Cell& cell = complex.cell(w);
            if (cell.dimension() < 1 || !contains_label(cell, v)) continue;
            CellId b = cell.facets[label_position(cell, v)];
            auto [it, fresh_entry] = absorption.try_emplace(b, w);
            if (!fresh_entry && it->second != w) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        std::vector<CellId> carriers;
        for (const CellId& m : closure)
            if (contains_label(complex.cell(m), v)) carriers.push_back(m);

        BlowupCenter center;
        center.case_tag = 2;
        center.carrier = carriers[rng.below(carriers.size())];
        center.incidence = std::move(closure);
        center.contraction_vertex = v;
        center.absorption = std::move(absorption);
        return center;
    }
}

std::vector<MoveResult> apply_sequence(const DeltaComplex& complex,
                                       const std::vector<BlowupCenter>& centers) {
    std::vector<MoveResult> results;
    const DeltaComplex* current = &complex;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        ValidationReport report = validate_center(*current, centers[i]);
        if (!report.ok())
            throw InvalidCenterError(std::move(report), static_cast<int>(i));
        if (centers[i].case_tag == 1)
            results.push_back(apply_case1(*current, centers[i].carrier));
        else
            results.push_back(apply_case2(*current, centers[i]));
        current = &results.back().complex_after;
    }
    return results;
}

namespace {

CellId parse_cell_id(const std::string& text, int line) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ParseError(line, 1, "expected <dim>:<index>, got '" + text + "'");
    try {
        return CellId{std::stoi(text.substr(0, colon)),
                      std::stoi(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw ParseError(line, 1, "malformed cell id '" + text + "'");
    }
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(sep, start);
        if (end == std::string::npos) {
            parts.push_back(text.substr(start));
            break;
        }
        parts.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return parts;
}

}  // namespace

std::vector<BlowupCenter> parse_moves(std::string_view text) {
    std::vector<BlowupCenter> moves;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::string line(text.substr(start, end == std::string_view::npos
                                                ? std::string_view::npos
                                                : end - start));
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream is(line);
        std::vector<std::string> tokens;
        for (std::string tok; is >> tok;) tokens.push_back(tok);
        if (!tokens.empty()) {
            if (tokens[0] != "move" || tokens.size() < 2)
                throw ParseError(line_no, 1, "expected 'move case1|case2 ...'");
            BlowupCenter center;
            if (tokens[1] == "case1") {
                center.case_tag = 1;
                bool have_cell = false;
                for (std::size_t i = 2; i < tokens.size(); ++i) {
                    if (tokens[i].rfind("cell=", 0) == 0) {
                        center.carrier = parse_cell_id(tokens[i].substr(5), line_no);
                        have_cell = true;
                    } else {
                        throw ParseError(line_no, 1, "unknown field '" + tokens[i] + "'");
                    }
                }
                if (!have_cell) throw ParseError(line_no, 1, "case1 needs cell=");
            } else if (tokens[1] == "case2") {
                center.case_tag = 2;
                bool have_carrier = false, have_v = false;
                for (std::size_t i = 2; i < tokens.size(); ++i) {
                    const std::string& tok = tokens[i];
                    if (tok.rfind("carrier=", 0) == 0) {
                        center.carrier = parse_cell_id(tok.substr(8), line_no);
                        have_carrier = true;
                    } else if (tok.rfind("v=", 0) == 0) {
                        center.contraction_vertex = std::stoi(tok.substr(2));
                        have_v = true;
                    } else if (tok.rfind("incidence=", 0) == 0) {
                        for (const auto& part : split(tok.substr(10), ','))
                            if (!part.empty())
                                center.incidence.push_back(parse_cell_id(part, line_no));
                    } else if (tok.rfind("absorb=", 0) == 0) {
                        for (const auto& part : split(tok.substr(7), ',')) {
                            if (part.empty()) continue;
                            auto arrow = part.find("->");
                            if (arrow == std::string::npos)
                                throw ParseError(line_no, 1,
                                                 "absorb entries use '<id>-><id>'");
                            center.absorption[parse_cell_id(part.substr(0, arrow),
                                                            line_no)] =
                                parse_cell_id(part.substr(arrow + 2), line_no);
                        }
                    } else {
                        throw ParseError(line_no, 1, "unknown field '" + tok + "'");
                    }
                }
                if (!have_carrier || !have_v)
                    throw ParseError(line_no, 1, "case2 needs carrier= and v=");
            } else {
                throw ParseError(line_no, 1, "unknown case '" + tokens[1] + "'");
            }
            moves.push_back(std::move(center));
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return moves;
}

std::string serialize_move(const BlowupCenter& center) {
    std::ostringstream os;
    if (center.case_tag == 1) {
        os << "move case1 cell=" << to_string(center.carrier);
        return os.str();
    }
    os << "move case2 carrier=" << to_string(center.carrier)
       << " v=" << center.contraction_vertex << " incidence=";
    for (std::size_t i = 0; i < center.incidence.size(); ++i) {
        if (i) os << ",";
        os << to_string(center.incidence[i]);
    }
    if (!center.absorption.empty()) {
        os << " absorb=";
        bool first = true;
        for (const auto& [from, to] : center.absorption) {
            if (!first) os << ",";
            first = false;
            os << to_string(from) << "->" << to_string(to);
        }
    }
    return os.str();
}

}  // namespace dualcx
