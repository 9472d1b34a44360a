#include "dualcx/export.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace dualcx {

namespace {

constexpr const char* kSchema = "dualcx/1";

void require_schema(const nlohmann::json& j, const char* type) {
    if (!j.is_object() || j.value("schema", "") != kSchema)
        throw std::invalid_argument("missing or wrong \"schema\" field");
    if (j.value("type", "") != type)
        throw std::invalid_argument(std::string("expected type \"") + type + "\"");
}

}  // namespace

std::string export_dot(const DeltaComplex& complex) {
    std::ostringstream os;
    os << "graph dual_complex {\n";
    for (std::size_t i = 0; i < complex.count(0); ++i)
        os << "  E" << complex.cells[0][i].labels[0] << ";\n";
    for (std::size_t e = 0; e < complex.count(1); ++e) {
        const Cell& edge = complex.cells[1][e];
        os << "  E" << edge.labels[0] << " -- E" << edge.labels[1] << ";\n";
    }
    os << "}\n";
    return os.str();
}

nlohmann::json complex_to_json(const DeltaComplex& complex) {
    nlohmann::json j;
    j["schema"] = kSchema;
    j["type"] = "complex";
    j["num_divisors"] = complex.num_divisors;
    if (complex.ambient_dim)
        j["ambient_dim"] = *complex.ambient_dim;
    else
        j["ambient_dim"] = nullptr;
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : complex.cells) {
        nlohmann::json cells = nlohmann::json::array();
        for (const Cell& c : layer) {
            nlohmann::json cell;
            cell["labels"] = c.labels;
            cell["component"] = c.component;
            nlohmann::json facets = nlohmann::json::array();
            for (const CellId& f : c.facets)
                facets.push_back(nlohmann::json::array({f.dim, f.index}));
            cell["facets"] = std::move(facets);
            cells.push_back(std::move(cell));
        }
        layers.push_back(std::move(cells));
    }
    j["cells"] = std::move(layers);
    return j;
}

DeltaComplex complex_from_json(const nlohmann::json& j) {
    require_schema(j, "complex");
    DeltaComplex complex;
    complex.num_divisors = j.at("num_divisors").get<int>();
    if (!j.at("ambient_dim").is_null())
        complex.ambient_dim = j.at("ambient_dim").get<int>();
    for (const auto& layer : j.at("cells")) {
        std::vector<Cell> cells;
        for (const auto& item : layer) {
            Cell c;
            c.labels = item.at("labels").get<std::vector<int>>();
            c.component = item.at("component").get<int>();
            for (const auto& f : item.at("facets"))
                c.facets.push_back(CellId{f.at(0).get<int>(), f.at(1).get<int>()});
            cells.push_back(std::move(c));
        }
        complex.cells.push_back(std::move(cells));
    }
    return complex;
}

nlohmann::json report_to_json(const HomologyReport& report) {
    nlohmann::json j;
    j["schema"] = kSchema;
    j["type"] = "homology_report";
    j["reduced"] = report.reduced;
    nlohmann::json degrees = nlohmann::json::array();
    for (const auto& deg : report.degrees) {
        nlohmann::json d;
        d["betti"] = deg.betti;
        nlohmann::json torsion = nlohmann::json::array();
        for (const Int& t : deg.torsion) torsion.push_back(t.str());
        d["torsion"] = std::move(torsion);
        degrees.push_back(std::move(d));
    }
    j["degrees"] = std::move(degrees);
    return j;
}

HomologyReport report_from_json(const nlohmann::json& j) {
    require_schema(j, "homology_report");
    HomologyReport report;
    report.reduced = j.at("reduced").get<bool>();
    for (const auto& item : j.at("degrees")) {
        HomologyDegree deg;
        deg.betti = item.at("betti").get<std::int64_t>();
        for (const auto& t : item.at("torsion"))
            deg.torsion.push_back(Int(t.get<std::string>()));
        report.degrees.push_back(std::move(deg));
    }
    return report;
}

nlohmann::json record_to_json(const FuzzRunRecord& record) {
    nlohmann::json j;
    j["schema"] = kSchema;
    j["type"] = "fuzz_record";
    j["seed"] = record.seed;
    j["moves"] = record.moves;
    j["digests"] = record.digests;
    j["outcome"] = record.pass ? "pass" : "violation";
    j["violation"] = record.violation;
    j["elapsed_ms"] = record.elapsed_ms;
    j["case1_moves"] = record.case1_moves;
    j["case2_moves"] = record.case2_moves;
    j["contractions_ok"] = record.contractions_ok;
    return j;
}

std::string export_json(const DeltaComplex& complex) {
    return complex_to_json(complex).dump(2) + "\n";
}
std::string export_json(const HomologyReport& report) {
    return report_to_json(report).dump(2) + "\n";
}
std::string export_json(const FuzzRunRecord& record) {
    return record_to_json(record).dump(2) + "\n";
}

}  // namespace dualcx
