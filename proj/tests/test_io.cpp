#include <catch2/catch_amalgamated.hpp>

#include "coalg/pipeline.hpp"
#include "coalg/structure_io.hpp"

using namespace coalg;

namespace {

std::string sample_path(const std::string& name) {
    return std::string(TEST_DATA_DIR) + "/../samples/" + name + ".json";
}

}  // namespace

TEST_CASE("built-in structures parse and match the samples") {
    AInfCoalgebra b1 = builtin_example1();
    REQUIRE(b1.space.size() == 5);
    REQUIRE(b1.space.degree(b1.space.index_of("w")) == 5);
    REQUIRE(b1.psi(3, b1.space.index_of("w")) ==
            Element::single(TensorWord{b1.space.index_of("x"), b1.space.index_of("y"),
                                       b1.space.index_of("z")}));

    AInfCoalgebra f1 = parse_structure_file(sample_path("example1"));
    REQUIRE(serialize_structure(f1) == serialize_structure(b1));

    AInfCoalgebra f2 = parse_structure_file(sample_path("example2"));
    REQUIRE(serialize_structure(f2) == serialize_structure(builtin_example2()));
    REQUIRE(f2.max_arity == 2);
}

TEST_CASE("serialization round-trips") {
    for (const auto& name : {"example1", "example2", "dg_pair", "odd_line"}) {
        AInfCoalgebra A = parse_structure_file(sample_path(name));
        json dumped = serialize_structure(A);
        AInfCoalgebra back = parse_structure_json(dumped);
        REQUIRE(serialize_structure(back) == dumped);
    }
}

TEST_CASE("parse errors carry context") {
    // Degree violation: a degree-5 word assigned at the wrong arity.
    const std::string degree_bad = R"({
      "name": "bad", "connected": true,
      "generators": [{"id": "x", "degree": 2}, {"id": "w", "degree": 5}],
      "cooperations": {"3": [{"on": "w", "terms": [{"coeff": 1, "word": ["x", "x", "1"]}]}]}
    })";
    REQUIRE_THROWS_WITH(parse_structure_text(degree_bad),
                        Catch::Matchers::ContainsSubstring("degree violation"));

    const std::string dup = R"({
      "name": "bad", "connected": true,
      "generators": [{"id": "x", "degree": 2}, {"id": "x", "degree": 3}]
    })";
    REQUIRE_THROWS_WITH(parse_structure_text(dup),
                        Catch::Matchers::ContainsSubstring("duplicate"));

    const std::string unknown = R"({
      "name": "bad", "connected": true, "generators": [], "surprise": 1
    })";
    REQUIRE_THROWS_WITH(parse_structure_text(unknown),
                        Catch::Matchers::ContainsSubstring("unknown field"));

    REQUIRE_THROWS_AS(parse_structure_text("{ not json"), ParseError);
    REQUIRE_THROWS_AS(parse_structure_file("/nonexistent/path.json"), ParseError);

    const std::string bad_coeff = R"({
      "name": "bad", "connected": true,
      "generators": [{"id": "x", "degree": 2}],
      "cooperations": {"2": [{"on": "x", "terms": [{"coeff": "1/0", "word": ["1", "x"]}]}]}
    })";
    REQUIRE_THROWS_WITH(parse_structure_text(bad_coeff),
                        Catch::Matchers::ContainsSubstring("rational"));
}

TEST_CASE("rational literals") {
    REQUIRE(parse_rational("3/4").value() == Rational(3, 4));
    REQUIRE(parse_rational("-7").value() == Rational(-7));
    REQUIRE(parse_rational("x").has_value() == false);
    REQUIRE(parse_rational("1/0").has_value() == false);
}

TEST_CASE("pipeline verdicts") {
    Caps caps{10, 3};
    PipelineResult r1 = run_pipeline(builtin_example1(), caps);
    REQUIRE(r1.pass());
    // The rank table shows the degree-5 separation.
    bool found = false;
    for (const auto& [d, r] : r1.ell3_ranks)
        if (d == 5) {
            REQUIRE(r == 1);
            found = true;
        }
    REQUIRE(found);

    PipelineResult r2 = run_pipeline(builtin_example2(), caps);
    REQUIRE(r2.pass());
    for (const auto& [d, r] : r2.ell3_ranks) REQUIRE(r == 0);
}

TEST_CASE("comparison verdict") {
    Caps caps{10, 4};
    CompareResult res = compare_structures(builtin_example1(), builtin_example2(), caps);
    REQUIRE(res.same_lie_dimensions);
    REQUIRE(res.distinguished_by_ell3);
}
