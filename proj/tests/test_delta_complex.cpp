#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dualcx/blowup.hpp"
#include "dualcx/corpus.hpp"
#include "dualcx/delta_complex.hpp"
#include "dualcx/homology.hpp"
#include "dualcx/snc_config.hpp"

#include "oracles.hpp"

using namespace dualcx;

namespace {

// boundary of a triangle: vertices 1,2,3 and the three edges
DeltaComplex triangle_boundary() {
    DeltaComplex c;
    c.num_divisors = 3;
    c.ambient_dim = 3;
    c.cells.resize(2);
    c.cells[0] = {Cell{{1}, 1, {}}, Cell{{2}, 1, {}}, Cell{{3}, 1, {}}};
    c.cells[1] = {Cell{{1, 2}, 1, {{0, 1}, {0, 0}}},
                  Cell{{1, 3}, 1, {{0, 2}, {0, 0}}},
                  Cell{{2, 3}, 1, {{0, 2}, {0, 1}}}};
    return c;
}

DeltaComplex full_2_simplex() {
    DeltaComplex c = triangle_boundary();
    c.cells.resize(3);
    c.cells[2] = {Cell{{1, 2, 3}, 1, {{1, 2}, {1, 1}, {1, 0}}}};
    return c;
}

DeltaComplex from_fixture(const std::string& name) {
    return build_dual_complex(*generate_fixture(name).config);
}

}  // namespace

TEST_CASE("validate accepts consistent small complexes") {
    CHECK(validate(triangle_boundary()).ok());
    CHECK(validate(full_2_simplex()).ok());
}

TEST_CASE("validate flags an edge facet with the wrong label") {
    DeltaComplex c = triangle_boundary();
    c.cells[1][0].facets[0] = CellId{0, 2};  // edge {1,2} now claims vertex 3
    ValidationReport report = validate(c);
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations.size() == 1);
    CHECK(report.violations[0].cells[0] == CellId{1, 0});
}

TEST_CASE("validate flags duplicate vertices per divisor") {
    DeltaComplex c;
    c.num_divisors = 2;
    c.cells.resize(1);
    c.cells[0] = {Cell{{1}, 1, {}}, Cell{{1}, 2, {}}};
    ValidationReport report = validate(c);
    REQUIRE_FALSE(report.ok());
    bool found = false;
    for (const auto& v : report.violations)
        if (v.message.find("duplicate vertex for divisor 1") != std::string::npos)
            found = true;
    CHECK(found);
}

TEST_CASE("f_vector and euler characteristic") {
    CHECK(f_vector(triangle_boundary()) == std::vector<std::size_t>{3, 3});
    CHECK(f_vector(full_2_simplex()) == std::vector<std::size_t>{3, 3, 1});
    CHECK(euler_characteristic(triangle_boundary()) == 0);
    CHECK(euler_characteristic(full_2_simplex()) == 1);

    DeltaComplex cycle2 = from_fixture("cycle_2");
    CHECK(f_vector(cycle2) == std::vector<std::size_t>{2, 2});

    // stellar subdivision of the full 2-simplex at its 2-cell
    MoveResult subdivided = apply_case1(full_2_simplex(), CellId{2, 0});
    CHECK(f_vector(subdivided.complex_after) == std::vector<std::size_t>{4, 6, 3});
    CHECK(euler_characteristic(subdivided.complex_after) == 1);
}

TEST_CASE("connected components") {
    CHECK(connected_components(triangle_boundary()).count == 1);

    DeltaComplex two_points;
    two_points.num_divisors = 2;
    two_points.cells.resize(1);
    two_points.cells[0] = {Cell{{1}, 1, {}}, Cell{{2}, 1, {}}};
    CHECK(connected_components(two_points).count == 2);

    CHECK(connected_components(from_fixture("cycle_5")).count == 1);
}

TEST_CASE("cofaces agree with the exhaustive scan") {
    DeltaComplex simplex = full_2_simplex();
    auto star = cofaces(simplex, CellId{1, 0});
    CHECK(star == std::vector<CellId>{CellId{1, 0}, CellId{2, 0}});

    DeltaComplex boundary = triangle_boundary();
    auto vertex_star = cofaces(boundary, CellId{0, 0});
    CHECK(vertex_star == std::vector<CellId>{CellId{0, 0}, CellId{1, 0}, CellId{1, 1}});

    DeltaComplex cycle2 = from_fixture("cycle_2");
    auto v1 = *cycle2.find_vertex(1);
    auto star2 = cofaces(cycle2, v1);
    CHECK(star2.size() == 3);  // the vertex and both parallel edges
    CHECK(star2 == oracle::brute_force_cofaces(cycle2, v1));

    for (const CellId& id : simplex.all_cells())
        CHECK(cofaces(simplex, id) == oracle::brute_force_cofaces(simplex, id));

    CHECK_THROWS_AS(cofaces(simplex, CellId{5, 0}), std::out_of_range);
}

TEST_CASE("iterated faces are order independent") {
    DeltaComplex simplex = full_2_simplex();
    CHECK(iterated_face(simplex, CellId{2, 0}, {1, 2}) == CellId{0, 2});
    CHECK(iterated_face(simplex, CellId{2, 0}, {2, 1}) == CellId{0, 2});
    CHECK(iterated_face(simplex, CellId{2, 0}, {3}) == CellId{1, 0});
}

namespace {

DeltaMap identity_map(const DeltaComplex& c) {
    DeltaMap map;
    map.source = c;
    map.target = c;
    for (const Cell& v : c.cells[0])
        map.vertex_assignment[v.labels[0]] = v.labels[0];
    map.cell_assignment.resize(c.cells.size());
    for (int d = 0; d < static_cast<int>(c.cells.size()); ++d)
        for (int i = 0; i < static_cast<int>(c.cells[d].size()); ++i)
            map.cell_assignment[d].push_back(CellId{d, i});
    return map;
}

}  // namespace

TEST_CASE("chain map of the identity is the identity") {
    DeltaComplex simplex = full_2_simplex();
    DeltaMap id = identity_map(simplex);
    REQUIRE(validate(id).ok());
    for (int k = 0; k <= 2; ++k) {
        IntMatrix m = build_chain_map(id, k);
        CHECK(m == IntMatrix::Identity(m.rows(), m.cols()));
    }
}

TEST_CASE("collapsing an edge gives a zero column") {
    // map the triangle boundary onto the edge {1,3} by sending 2 -> 1
    DeltaComplex src = triangle_boundary();
    DeltaComplex tgt;
    tgt.num_divisors = 3;
    tgt.cells.resize(2);
    tgt.cells[0] = {Cell{{1}, 1, {}}, Cell{{3}, 1, {}}};
    tgt.cells[1] = {Cell{{1, 3}, 1, {{0, 1}, {0, 0}}}};
    REQUIRE(validate(tgt).ok());

    DeltaMap map;
    map.source = src;
    map.target = tgt;
    map.vertex_assignment = {{1, 1}, {2, 1}, {3, 3}};
    map.cell_assignment.resize(2);
    map.cell_assignment[0] = {CellId{0, 0}, CellId{0, 0}, CellId{0, 1}};
    map.cell_assignment[1] = {std::nullopt, CellId{1, 0}, CellId{1, 0}};
    REQUIRE(validate(map).ok());

    IntMatrix m = build_chain_map(map, 1);
    CHECK(m.col(0).isZero());
    CHECK(m(0, 1) == 1);
    CHECK(m(0, 2) == 1);
    CHECK(chain_map_commutes(map));
}

TEST_CASE("degeneracy bookkeeping is enforced") {
    DeltaComplex src = triangle_boundary();
    DeltaMap map = identity_map(src);
    map.cell_assignment[1][0] = std::nullopt;  // injective cell marked degenerate
    CHECK_FALSE(validate(map).ok());
}

TEST_CASE("facet compatibility and euler identity on fixtures") {
    for (const char* name : {"sphere2", "torus7", "rp2_6", "cycle_7"}) {
        DeltaComplex c = from_fixture(name);
        CHECK(validate(c).ok());
        long long alt = 0;
        int sign = 1;
        for (std::size_t n : f_vector(c)) {
            alt += sign * static_cast<long long>(n);
            sign = -sign;
        }
        CHECK(euler_characteristic(c) == alt);
    }
}

TEST_CASE("relabeling divisors by an order-preserving injection") {
    DeltaComplex c = from_fixture("cycle_3");
    std::map<int, int> shift{{1, 2}, {2, 5}, {3, 9}};
    DeltaComplex relabeled = relabel_divisors(c, shift, 9);
    CHECK(validate(relabeled).ok());
    CHECK(homology(relabeled) == homology(c));
    std::map<int, int> bad{{1, 5}, {2, 2}, {3, 9}};
    CHECK_THROWS_AS(relabel_divisors(c, bad, 9), std::invalid_argument);
}
