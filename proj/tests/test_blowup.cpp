#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "dualcx/blowup.hpp"
#include "dualcx/corpus.hpp"
#include "dualcx/homology.hpp"
#include "dualcx/snc_config.hpp"

#include "oracles.hpp"

using namespace dualcx;

namespace {

DeltaComplex from_fixture(const std::string& name) {
    return build_dual_complex(*generate_fixture(name).config);
}

bool is_point_homology(const HomologyReport& reduced) {
    for (const auto& deg : reduced.degrees)
        if (deg.betti != 0 || !deg.torsion.empty()) return false;
    return true;
}

}  // namespace

TEST_CASE("validate_center: case 1 needs only an existing cell") {
    DeltaComplex c = from_fixture("cycle_3");
    BlowupCenter center;
    center.case_tag = 1;
    center.carrier = CellId{1, 0};
    CHECK(validate_center(c, center).ok());
    center.carrier = CellId{2, 5};
    CHECK_FALSE(validate_center(c, center).ok());
}

TEST_CASE("validate_center: incidence must be face-closed") {
    DeltaComplex c = from_fixture("cycle_3");
    BlowupCenter center;
    center.case_tag = 2;
    center.carrier = *c.find_vertex(1);
    center.contraction_vertex = 1;
    center.incidence = {*c.find_vertex(1), CellId{1, 0}};  // edge {1,2} without vertex 2
    ValidationReport report = validate_center(c, center);
    REQUIRE_FALSE(report.ok());
    bool found = false;
    for (const auto& v : report.violations)
        if (v.message.find("face-closed") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("validate_center: missing absorption is reported with the cell") {
    DeltaComplex c = from_fixture("cycle_3");
    BlowupCenter center;
    center.case_tag = 2;
    center.carrier = *c.find_vertex(1);
    center.contraction_vertex = 1;
    center.incidence = {*c.find_vertex(1), *c.find_vertex(2), CellId{1, 0}};
    ValidationReport report = validate_center(c, center);
    REQUIRE_FALSE(report.ok());
    bool found = false;
    for (const auto& v : report.violations)
        if (v.message.find("missing absorption") != std::string::npos &&
            !v.cells.empty() && v.cells[0] == *c.find_vertex(2))
            found = true;
    CHECK(found);
}

TEST_CASE("case 1 on the full 2-simplex at the 2-cell") {
    DeltaComplex simplex = from_fixture("simplex_full_2");
    MoveResult result = apply_case1(simplex, CellId{2, 0});
    CHECK(result.new_vertex_label == 4);
    CHECK(validate(result.complex_after).ok());
    CHECK(f_vector(result.complex_after) == std::vector<std::size_t>{4, 6, 3});
    CHECK(euler_characteristic(result.complex_after) == 1);
    HomologyReport report = homology(result.complex_after);
    CHECK(report.betti(0) == 1);
    CHECK(report.betti(1) == 0);
    CHECK(report.betti(2) == 0);
    CHECK(oracle::betti_via_ranks(result.complex_after) ==
          std::vector<long long>{1, 0, 0});
}

TEST_CASE("case 1 on the full 2-simplex at an edge") {
    DeltaComplex simplex = from_fixture("simplex_full_2");
    // edges are ordered {1,2}, {1,3}, {2,3}
    MoveResult result = apply_case1(simplex, CellId{1, 0});
    CHECK(validate(result.complex_after).ok());
    CHECK(f_vector(result.complex_after) == std::vector<std::size_t>{4, 5, 2});
    CHECK(euler_characteristic(result.complex_after) == 1);
    CHECK(oracle::betti_via_ranks(result.complex_after) ==
          std::vector<long long>{1, 0, 0});
}

TEST_CASE("case 1 on the triangle boundary keeps the cycle") {
    DeltaComplex boundary = from_fixture("cycle_3");
    HomologyReport before = homology(boundary);
    MoveResult result = apply_case1(boundary, CellId{1, 0});
    CHECK(validate(result.complex_after).ok());
    CHECK(f_vector(result.complex_after) == std::vector<std::size_t>{4, 4});
    CHECK(homology(result.complex_after) == before);
    CHECK(result.complex_after.count(0) == boundary.count(0) + 1);
}

TEST_CASE("case 1 at a vertex relabels it to the fresh divisor") {
    DeltaComplex boundary = from_fixture("cycle_3");
    MoveResult result = apply_case1(boundary, *boundary.find_vertex(2));
    CHECK(validate(result.complex_after).ok());
    CHECK(f_vector(result.complex_after) == std::vector<std::size_t>{3, 3});
    CHECK(homology(result.complex_after) == homology(boundary));
    CHECK(result.complex_after.find_vertex(4).has_value());
    CHECK_FALSE(result.complex_after.find_vertex(2).has_value());
}

TEST_CASE("case 2 cone over a single vertex") {
    DeltaComplex c;
    c.num_divisors = 1;
    c.cells.resize(1);
    c.cells[0] = {Cell{{1}, 1, {}}};
    BlowupCenter center;
    center.case_tag = 2;
    center.carrier = CellId{0, 0};
    center.contraction_vertex = 1;
    center.incidence = {CellId{0, 0}};
    REQUIRE(validate_center(c, center).ok());

    MoveResult result = apply_case2(c, center);
    CHECK(validate(result.complex_after).ok());
    CHECK(f_vector(result.complex_after) == std::vector<std::size_t>{2, 1});
    HomologyReport unreduced = homology(result.complex_after);
    CHECK(unreduced.betti(0) == 1);
    CHECK(is_point_homology(homology(result.complex_after, true)));
    REQUIRE(result.contraction.has_value());
    CHECK(validate(*result.contraction).ok());
    CHECK(chain_map_commutes(*result.contraction));
}

TEST_CASE("case 2 worked fixture on the triangle boundary") {
    DeltaComplex boundary = from_fixture("cycle_3");
    // vertices 1,2,3 at indices 0,1,2; edges {1,2},{1,3},{2,3} at 0,1,2
    BlowupCenter center;
    center.case_tag = 2;
    center.carrier = CellId{0, 0};
    center.contraction_vertex = 1;
    center.incidence = {CellId{0, 0}, CellId{0, 1}, CellId{0, 2}, CellId{1, 0},
                        CellId{1, 1}};
    center.absorption[CellId{0, 1}] = CellId{1, 0};  // vertex 2 -> edge {1,2}
    center.absorption[CellId{0, 2}] = CellId{1, 1};  // vertex 3 -> edge {1,3}
    REQUIRE(validate_center(boundary, center).ok());

    MoveResult result = apply_case2(boundary, center);
    const DeltaComplex& after = result.complex_after;
    CHECK(validate(after).ok());
    CHECK(result.new_vertex_label == 4);
    // one cone cell per incidence cell: edges F1,F2,F3 and triangles F12,F13
    CHECK(f_vector(after) == std::vector<std::size_t>{4, 6, 2});
    std::multiset<std::vector<int>> tuples;
    for (const Cell& cell : after.cells[2]) tuples.insert(cell.labels);
    CHECK(tuples == std::multiset<std::vector<int>>{{1, 2, 4}, {1, 3, 4}});

    HomologyReport before = homology(boundary);
    CHECK(homology(after) == before);
    CHECK(before.betti(0) == 1);
    CHECK(before.betti(1) == 1);

    // every cone cell's last facet is its base
    for (int d = 1; d < static_cast<int>(after.cells.size()); ++d)
        for (const Cell& cell : after.cells[d])
            if (cell.labels.back() == 4) {
                CellId base = cell.facets.back();
                std::vector<int> expect = cell.labels;
                expect.pop_back();
                CHECK(after.cell(base).labels == expect);
            }

    REQUIRE(result.contraction.has_value());
    const DeltaMap& contraction = *result.contraction;
    CHECK(validate(contraction).ok());
    CHECK(chain_map_commutes(contraction));
    // commutation, spelled out against the boundary operators
    for (int k = 1; k <= after.dimension(); ++k) {
        IntMatrix fk = build_chain_map(contraction, k);
        IntMatrix fk1 = build_chain_map(contraction, k - 1);
        IntMatrix lhs_bd = k <= boundary.dimension()
                               ? boundary_matrix(boundary, k)
                               : IntMatrix::Zero(boundary.count(k - 1), 0);
        CHECK(lhs_bd * fk == fk1 * boundary_matrix(after, k));
    }
    InducedRanks ranks = induced_homology_ranks(contraction);
    CHECK(ranks.all_isomorphisms());
}

TEST_CASE("case 2 rejects chain-incompatible absorption") {
    DeltaComplex cycle2 = from_fixture("cycle_2");
    // both parallel edges contain vertex 1: their v-drops collide
    BlowupCenter center;
    center.case_tag = 2;
    center.carrier = *cycle2.find_vertex(1);
    center.contraction_vertex = 1;
    center.incidence = cycle2.all_cells();
    center.absorption[*cycle2.find_vertex(2)] = CellId{1, 0};
    ValidationReport report = validate_center(cycle2, center);
    REQUIRE_FALSE(report.ok());
    bool found = false;
    for (const auto& v : report.violations)
        if (v.message.find("chain-compatible") != std::string::npos) found = true;
    CHECK(found);
    CHECK_THROWS_AS(apply_case2(cycle2, center), InvalidCenterError);
}

TEST_CASE("random centers are valid, deterministic and cover both cases") {
    DeltaComplex torus = from_fixture("torus7");
    int case1 = 0, case2 = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        BlowupCenter center = random_center(torus, seed);
        CHECK(validate_center(torus, center).ok());
        (center.case_tag == 1 ? case1 : case2) += 1;
    }
    CHECK(case1 > 200);
    CHECK(case2 > 200);

    BlowupCenter a = random_center(torus, 42);
    BlowupCenter b = random_center(torus, 42);
    CHECK(serialize_move(a) == serialize_move(b));

    // parallel edges force the collision-retry path
    DeltaComplex cycle2 = from_fixture("cycle_2");
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        CHECK(validate_center(cycle2, random_center(cycle2, seed)).ok());
}

TEST_CASE("apply_sequence folds moves and validates centers") {
    DeltaComplex cycle4 = from_fixture("cycle_4");
    CHECK(apply_sequence(cycle4, {}).empty());

    std::vector<BlowupCenter> centers;
    BlowupCenter first;
    first.case_tag = 1;
    first.carrier = CellId{1, 0};
    centers.push_back(first);

    DeltaComplex mid = apply_case1(cycle4, first.carrier).complex_after;
    centers.push_back(random_center(mid, 7, CaseWeights{0, 1}));

    std::vector<MoveResult> results = apply_sequence(cycle4, centers);
    REQUIRE(results.size() == 2);
    HomologyReport final_report = homology(results.back().complex_after);
    CHECK(final_report.betti(0) == 1);
    CHECK(final_report.betti(1) == 1);
    for (const auto& r : results) CHECK(validate(r.complex_after).ok());
}

TEST_CASE("invalid center aborts the sequence with its index") {
    DeltaComplex cycle3 = from_fixture("cycle_3");
    BlowupCenter good;
    good.case_tag = 1;
    good.carrier = CellId{1, 0};
    BlowupCenter bad;
    bad.case_tag = 1;
    bad.carrier = CellId{9, 9};
    try {
        apply_sequence(cycle3, {good, bad});
        FAIL("expected InvalidCenterError");
    } catch (const InvalidCenterError& e) {
        CHECK(e.move_index == 1);
        CHECK_FALSE(e.report.ok());
    }
}

TEST_CASE("five random moves preserve torsion on the projective plane") {
    DeltaComplex rp2 = from_fixture("rp2_6");
    HomologyReport expected = homology(rp2);
    REQUIRE(*expected.torsion(1) == std::vector<Int>{Int(2)});
    DeltaComplex current = rp2;
    for (int m = 0; m < 5; ++m) {
        BlowupCenter center = random_center(current, mix_seed(99, m));
        MoveResult result = center.case_tag == 1
                                ? apply_case1(current, center.carrier)
                                : apply_case2(current, center);
        current = result.complex_after;
        CHECK(validate(current).ok());
        CHECK(homology(current) == expected);
    }
}

TEST_CASE("case 1 commutes with relabeling") {
    DeltaComplex c = from_fixture("cycle_4");
    std::map<int, int> shift;
    for (int i = 1; i <= c.num_divisors; ++i) shift[i] = i + 2;
    DeltaComplex relabeled = relabel_divisors(c, shift, c.num_divisors + 2);
    HomologyReport direct = homology(apply_case1(c, CellId{1, 1}).complex_after);
    HomologyReport shifted =
        homology(apply_case1(relabeled, CellId{1, 1}).complex_after);
    CHECK(direct == shifted);
}

TEST_CASE("move files round-trip") {
    const char* text =
        "# two moves\n"
        "move case1 cell=1:0\n"
        "move case2 carrier=0:0 v=1 incidence=0:0,0:1,1:0 absorb=0:1->1:0\n";
    std::vector<BlowupCenter> moves = parse_moves(text);
    REQUIRE(moves.size() == 2);
    CHECK(moves[0].case_tag == 1);
    CHECK(moves[0].carrier == CellId{1, 0});
    CHECK(moves[1].case_tag == 2);
    CHECK(moves[1].contraction_vertex == 1);
    CHECK(moves[1].incidence.size() == 3);
    CHECK(moves[1].absorption.at(CellId{0, 1}) == CellId{1, 0});
    for (const auto& m : moves) {
        std::vector<BlowupCenter> again = parse_moves(serialize_move(m));
        REQUIRE(again.size() == 1);
        CHECK(serialize_move(again[0]) == serialize_move(m));
    }
    CHECK_THROWS_AS(parse_moves("move case3 cell=0:0\n"), ParseError);
    CHECK_THROWS_AS(parse_moves("move case1\n"), ParseError);
}
