// dualcx: command-line front end for the dual-complex toolkit.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dualcx/blowup.hpp"
#include "dualcx/corpus.hpp"
#include "dualcx/export.hpp"
#include "dualcx/homology.hpp"
#include "dualcx/snc_config.hpp"
#include "dualcx/toric.hpp"

namespace {

// exit codes: 0 ok, 1 validation failure, 2 parse error, 3 property
// violation, 4 unsupported input
constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kParseError = 2;
constexpr int kPropertyViolation = 3;
constexpr int kUnsupported = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw dualcx::UnsupportedError("cannot open file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw dualcx::UnsupportedError("cannot write file '" + path + "'");
    out << text;
}

enum class FileKind { Snc, Fan };

FileKind sniff(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (ls >> tok && tok[0] != '#') {
            if (tok == "snc") return FileKind::Snc;
            if (tok == "fan") return FileKind::Fan;
            break;
        }
    }
    throw dualcx::ParseError(1, 1, "file must start with 'snc' or 'fan'");
}

dualcx::DeltaComplex complex_from_file(const std::string& path) {
    const std::string text = read_file(path);
    if (sniff(text) == FileKind::Snc)
        return dualcx::build_dual_complex(dualcx::parse_config(text));
    return dualcx::cross_section_complex(
        dualcx::canonicalize(dualcx::triangulate_fan(dualcx::parse_fan(text))));
}

void print_summary(const dualcx::DeltaComplex& complex,
                   const dualcx::HomologyReport& report) {
    std::cout << "cells (";
    auto f = dualcx::f_vector(complex);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) std::cout << ", ";
        std::cout << f[i];
    }
    std::cout << "), chi " << dualcx::euler_characteristic(complex) << "\n";
    std::cout << report.to_string() << "\n";
}

int cmd_validate(const std::string& path) {
    const std::string text = read_file(path);
    if (sniff(text) == FileKind::Snc) {
        dualcx::SncConfig config = dualcx::parse_config(text);
        dualcx::DeltaComplex complex = dualcx::build_dual_complex(config);
        dualcx::ValidationReport report = dualcx::validate(complex);
        std::cout << report.to_string() << "\n";
        return report.ok() ? kOk : kValidationFailure;
    }
    dualcx::Fan fan =
        dualcx::canonicalize(dualcx::triangulate_fan(dualcx::parse_fan(text)));
    dualcx::ValidationReport report = dualcx::validate(fan);
    std::cout << report.to_string() << "\n";
    return report.ok() ? kOk : kValidationFailure;
}

int cmd_homology(const std::string& path, bool reduced, bool json) {
    dualcx::DeltaComplex complex = complex_from_file(path);
    dualcx::HomologyReport report = dualcx::homology(complex, reduced);
    if (json)
        std::cout << dualcx::export_json(report);
    else
        print_summary(complex, report);
    return kOk;
}

int cmd_blowup(const std::string& path, const std::string& moves_path,
               bool verify_contraction) {
    dualcx::DeltaComplex complex =
        dualcx::build_dual_complex(dualcx::parse_config(read_file(path)));
    std::vector<dualcx::BlowupCenter> centers =
        dualcx::parse_moves(read_file(moves_path));

    const dualcx::HomologyReport before = dualcx::homology(complex);
    std::cout << "start: " << before.to_string() << "\n";
    std::vector<dualcx::MoveResult> results;
    try {
        results = dualcx::apply_sequence(complex, centers);
    } catch (const dualcx::InvalidCenterError& e) {
        std::cerr << "move " << e.move_index << " invalid: " << e.report.to_string()
                  << "\n";
        return kValidationFailure;
    }

    bool invariant = true;
    bool contractions_ok = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const dualcx::MoveResult& r = results[i];
        dualcx::HomologyReport report = dualcx::homology(r.complex_after);
        std::cout << "after move " << i << " (case " << centers[i].case_tag
                  << ", F=E" << r.new_vertex_label << "): " << report.to_string()
                  << "\n";
        if (!(report == before)) invariant = false;
        if (verify_contraction && r.contraction) {
            bool ok = dualcx::validate(*r.contraction).ok() &&
                      dualcx::chain_map_commutes(*r.contraction) &&
                      dualcx::induced_homology_ranks(*r.contraction)
                          .all_isomorphisms();
            std::cout << "  contraction: "
                      << (ok ? "chain map, homology isomorphism" : "FAILED") << "\n";
            if (!ok) contractions_ok = false;
        }
    }
    if (!invariant) std::cerr << "homology changed along the move sequence\n";
    if (!contractions_ok) std::cerr << "contraction verification failed\n";
    return invariant && contractions_ok ? kOk : kPropertyViolation;
}

int cmd_fuzz(int trials, int moves, std::uint64_t seed, bool json) {
    dualcx::FuzzOptions options;
    options.trials = trials;
    options.moves_per_trial = moves;
    options.seed = seed;
    std::vector<dualcx::FuzzRunRecord> records = dualcx::run_fuzz(options);
    bool all_pass = true;
    if (json) {
        std::cout << "[\n";
        for (std::size_t i = 0; i < records.size(); ++i) {
            std::cout << dualcx::record_to_json(records[i]).dump(2);
            if (i + 1 < records.size()) std::cout << ",";
            std::cout << "\n";
        }
        std::cout << "]\n";
    }
    int case1 = 0, case2 = 0;
    for (const auto& r : records) {
        if (!r.pass) {
            all_pass = false;
            if (!json)
                std::cout << "trial seed " << r.seed << ": VIOLATION " << r.violation
                          << "\n";
        }
        case1 += r.case1_moves;
        case2 += r.case2_moves;
    }
    if (!json)
        std::cout << records.size() << " trials, "
                  << (all_pass ? "all passed" : "violations found") << " (case1 moves "
                  << case1 << ", case2 moves " << case2 << ")\n";
    return all_pass ? kOk : kPropertyViolation;
}

int cmd_toric_resolve(const std::string& path, const std::string& out) {
    dualcx::Fan fan = dualcx::parse_fan(read_file(path));
    dualcx::ResolveTrace trace;
    dualcx::Fan resolved = dualcx::resolve_fan(fan, &trace);
    dualcx::SmoothnessReport smooth = dualcx::is_smooth_fan(resolved);
    std::cout << "subdivisions: " << trace.steps.size() << ", rays "
              << fan.rays.size() << " -> " << resolved.rays.size() << ", smooth: "
              << (smooth.smooth ? "yes" : "NO") << "\n";
    for (const auto& step : trace.steps) {
        std::cout << "  ray";
        for (Eigen::Index i = 0; i < step.ray.size(); ++i)
            std::cout << " " << step.ray(i);
        std::cout << "\n";
    }
    if (!out.empty()) write_file(out, dualcx::serialize_fan(resolved));
    return smooth.smooth ? kOk : kValidationFailure;
}

int cmd_toric_complex(const std::string& path, bool interior, bool json, bool dot) {
    dualcx::Fan fan =
        dualcx::canonicalize(dualcx::triangulate_fan(dualcx::parse_fan(read_file(path))));
    dualcx::DeltaComplex complex =
        interior ? dualcx::interior_complex(fan) : dualcx::cross_section_complex(fan);
    if (interior && complex.total_cells() == 0)
        std::cerr << "note: interior complex is empty (no ray avoids the boundary "
                     "set)\n";
    if (json)
        std::cout << dualcx::export_json(complex);
    else if (dot)
        std::cout << dualcx::export_dot(complex);
    else
        print_summary(complex, dualcx::homology(complex));
    return kOk;
}

int cmd_corpus(const std::string& name, const std::string& out) {
    dualcx::Fixture fixture = dualcx::generate_fixture(name);
    if (fixture.kind == dualcx::Fixture::Kind::Pending) {
        std::cout << fixture.name << ": no data (pending fixture)\n"
                  << fixture.note << "\n";
        if (!out.empty()) {
            std::cerr << "nothing to write for a pending fixture\n";
            return kUnsupported;
        }
        return kOk;
    }
    std::string payload = fixture.kind == dualcx::Fixture::Kind::Snc
                              ? dualcx::serialize_config(*fixture.config)
                              : dualcx::serialize_fan(*fixture.fan);
    if (out.empty())
        std::cout << payload;
    else
        write_file(out, payload);
    return kOk;
}

int cmd_export(const std::string& path, const std::string& format) {
    dualcx::DeltaComplex complex = complex_from_file(path);
    if (format == "dot")
        std::cout << dualcx::export_dot(complex);
    else if (format == "json")
        std::cout << dualcx::export_json(complex);
    else
        throw dualcx::UnsupportedError("unknown format '" + format + "'");
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual complexes of normal-crossing configurations: exact "
                 "homology, blowup moves, toric resolutions"};
    app.require_subcommand(1);

    std::string file, moves_file, out, name, format = "json";
    bool reduced = false, json = false, dot = false, interior = false;
    bool verify_contraction = false;
    int trials = 10, moves = 5;
    std::uint64_t seed = 1;

    auto* validate_cmd = app.add_subcommand("validate", "check a configuration or fan file");
    validate_cmd->add_option("file", file)->required();

    auto* homology_cmd = app.add_subcommand("homology", "Betti numbers and torsion");
    homology_cmd->add_option("file", file)->required();
    homology_cmd->add_flag("--reduced", reduced);
    homology_cmd->add_flag("--json", json);

    auto* blowup_cmd = app.add_subcommand("blowup", "apply a move file");
    blowup_cmd->add_option("file", file)->required();
    blowup_cmd->add_option("--moves", moves_file)->required();
    blowup_cmd->add_flag("--verify-contraction", verify_contraction);

    auto* fuzz_cmd = app.add_subcommand("fuzz", "homology-invariance fuzzing");
    fuzz_cmd->add_option("--trials", trials);
    fuzz_cmd->add_option("--moves", moves);
    fuzz_cmd->add_option("--seed", seed);
    fuzz_cmd->add_flag("--json", json);

    auto* toric_cmd = app.add_subcommand("toric", "fan operations");
    toric_cmd->require_subcommand(1);
    auto* resolve_cmd = toric_cmd->add_subcommand("resolve", "refine to a smooth fan");
    resolve_cmd->add_option("file", file)->required();
    resolve_cmd->add_option("--out", out);
    auto* complex_cmd = toric_cmd->add_subcommand("complex", "cross-section complex");
    complex_cmd->add_option("file", file)->required();
    complex_cmd->add_flag("--interior", interior);
    complex_cmd->add_flag("--json", json);
    complex_cmd->add_flag("--dot", dot);

    auto* corpus_cmd = app.add_subcommand("corpus", "write a fixture");
    corpus_cmd->add_option("name", name)->required();
    corpus_cmd->add_option("--out", out);

    auto* export_cmd = app.add_subcommand("export", "DOT or JSON export");
    export_cmd->add_option("file", file)->required();
    export_cmd->add_option("--format", format)->check(CLI::IsMember({"dot", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) return cmd_validate(file);
        if (homology_cmd->parsed()) return cmd_homology(file, reduced, json);
        if (blowup_cmd->parsed()) return cmd_blowup(file, moves_file, verify_contraction);
        if (fuzz_cmd->parsed()) return cmd_fuzz(trials, moves, seed, json);
        if (toric_cmd->parsed()) {
            if (resolve_cmd->parsed()) return cmd_toric_resolve(file, out);
            if (complex_cmd->parsed()) return cmd_toric_complex(file, interior, json, dot);
        }
        if (corpus_cmd->parsed()) return cmd_corpus(name, out);
        if (export_cmd->parsed()) return cmd_export(file, format);
    } catch (const dualcx::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParseError;
    } catch (const dualcx::UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return kUnsupported;
    } catch (const dualcx::ValidationError& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidationFailure;
    }
    return kOk;
}
