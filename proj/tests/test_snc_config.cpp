#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dualcx/corpus.hpp"
#include "dualcx/homology.hpp"
#include "dualcx/rng.hpp"
#include "dualcx/snc_config.hpp"

using namespace dualcx;

namespace {

const char* kTriangle =
    "snc triangle\n"
    "dim 3\n"
    "divisors 3\n"
    "cell 0 [1] 1\n"
    "cell 0 [2] 1\n"
    "cell 0 [3] 1\n"
    "cell 1 [1 2] 1 ; facets 1 1\n"
    "cell 1 [1 3] 1 ; facets 1 1\n"
    "cell 1 [2 3] 1 ; facets 1 1\n";

}  // namespace

TEST_CASE("parsing the triangle boundary file") {
    SncConfig config = parse_config(kTriangle);
    CHECK(config.name == "triangle");
    CHECK(config.ambient_dim == 3);
    CHECK(config.num_divisors == 3);
    int depth1 = 0, depth2 = 0;
    for (const auto& s : config.strata) {
        if (s.depth() == 1) ++depth1;
        if (s.depth() == 2) ++depth2;
    }
    CHECK(depth1 == 3);
    CHECK(depth2 == 3);

    DeltaComplex complex = build_dual_complex(config);
    CHECK(f_vector(complex) == std::vector<std::size_t>{3, 3});
}

TEST_CASE("comments and blank lines are ignored") {
    std::string text = std::string("# header comment\n\n") + kTriangle +
                       "# trailing comment\n";
    CHECK(parse_config(text) == parse_config(kTriangle));
}

TEST_CASE("labels must increase strictly") {
    const char* bad =
        "snc x\ndim 2\ndivisors 2\n"
        "cell 0 [1] 1\ncell 0 [2] 1\n"
        "cell 1 [2 1] 1 ; facets 1 1\n";
    try {
        parse_config(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 6);
        CHECK(std::string(e.what()).find("labels not strictly increasing") !=
              std::string::npos);
    }
}

TEST_CASE("dangling facet component reference") {
    const char* bad =
        "snc x\ndim 2\ndivisors 2\n"
        "cell 0 [1] 1\ncell 0 [2] 1\n"
        "cell 1 [1 2] 1 ; facets 1 2\n";  // vertex {1} has no component 2
    try {
        parse_config(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 6);
        CHECK(std::string(e.what()).find("dangling stratum reference") !=
              std::string::npos);
    }
}

TEST_CASE("duplicate stratum ids are rejected") {
    const char* bad =
        "snc x\ndim 2\ndivisors 2\n"
        "cell 0 [1] 1\ncell 0 [1] 1\n";
    CHECK_THROWS_AS(parse_config(bad), ParseError);
}

TEST_CASE("parse errors carry position information") {
    try {
        parse_config("snc x\ndim 2\ndivisors 1\ncell 0 [7] 1\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 4);
        CHECK(e.col > 1);
        CHECK(std::string(e.what()).find("out of range") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(""), ParseError);
    CHECK_THROWS_AS(parse_config("snc x\ndivisors 1\n"), ParseError);
    CHECK_THROWS_AS(parse_config("snc x\ndim 2\ndivisors 1\ncell 1 [1] 1\n"),
                    ParseError);
}

TEST_CASE("round-trip through serialize_config") {
    SncConfig triangle = parse_config(kTriangle);
    CHECK(parse_config(serialize_config(triangle)) == triangle);

    SncConfig empty;
    empty.name = "empty";
    empty.ambient_dim = 2;
    empty.num_divisors = 0;
    std::string text = serialize_config(empty);
    CHECK(parse_config(text) == empty);
    CHECK(text == "snc empty\ndim 2\ndivisors 0\n");

    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        SncConfig config = generate_random_complex(seed);
        CHECK(parse_config(serialize_config(config)) == config);
    }
}

TEST_CASE("building the parallel-edge configuration") {
    SncConfig config = generate_cycle_of_curves(2);
    DeltaComplex complex = build_dual_complex(config);
    CHECK(f_vector(complex) == std::vector<std::size_t>{2, 2});
    HomologyReport report = homology(complex);
    CHECK(report.betti(0) == 1);
    CHECK(report.betti(1) == 1);
}

TEST_CASE("building the full 2-simplex configuration") {
    DeltaComplex complex =
        build_dual_complex(*generate_fixture("simplex_full_2").config);
    CHECK(f_vector(complex) == std::vector<std::size_t>{3, 3, 1});
    CHECK(euler_characteristic(complex) == 1);
}

TEST_CASE("cell counts track stratum depths") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        SncConfig config = generate_random_complex(seed);
        DeltaComplex complex = build_dual_complex(config);
        std::vector<std::size_t> by_depth;
        for (const auto& s : config.strata) {
            if (by_depth.size() < static_cast<std::size_t>(s.depth()))
                by_depth.resize(s.depth());
            ++by_depth[s.depth() - 1];
        }
        CHECK(f_vector(complex) == by_depth);
    }
}

TEST_CASE("facet-compatibility violations are rejected with the stratum") {
    // 3-cell whose two faces resolve the edge {1,2} to different components
    SncConfig config;
    config.name = "incompatible";
    config.ambient_dim = 4;
    config.num_divisors = 4;
    for (int i = 1; i <= 4; ++i) config.strata.push_back({{i}, 1, {}});
    config.strata.push_back({{1, 2}, 1, {1, 1}});
    config.strata.push_back({{1, 2}, 2, {1, 1}});
    for (auto pair : {std::pair{1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}})
        config.strata.push_back({{pair.first, pair.second}, 1, {1, 1}});
    config.strata.push_back({{1, 2, 3}, 1, {1, 1, 1}});
    config.strata.push_back({{1, 2, 4}, 1, {1, 1, 2}});  // uses {1,2}^2
    config.strata.push_back({{1, 3, 4}, 1, {1, 1, 1}});
    config.strata.push_back({{2, 3, 4}, 1, {1, 1, 1}});
    config.strata.push_back({{1, 2, 3, 4}, 1, {1, 1, 1, 1}});
    CHECK(validate(config).ok());  // referentially sound
    CHECK_THROWS_AS(build_dual_complex(config), ValidationError);
    try {
        build_dual_complex(config);
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("facet compatibility") != std::string::npos);
    }
}
