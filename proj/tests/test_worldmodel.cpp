#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "mmk/rng.hpp"
#include "mmk/worldmodel.hpp"

using Catch::Matchers::ContainsSubstring;

namespace {

mmk::World small_world() {
    return mmk::build_world(
        {"m1", "m2", "m3"},
        {mmk::Edge{"r1", {"m1", "m2"}, false}, mmk::Edge{"r2", {"m2", "m3"}, false}},
        {{"r1", {{"phi", 0.7}}}, {"r2", {{"phi", 0.2}}}});
}

// Random world with `n` atoms and `m` unordered edges over them.
mmk::World random_world(mmk::Rng& rng) {
    const int n = 1 + static_cast<int>(rng.below(6));
    std::vector<std::string> atoms;
    for (int i = 0; i < n; ++i) {
        atoms.push_back("a" + std::to_string(i));
    }
    const int m = static_cast<int>(rng.below(5));
    std::vector<mmk::Edge> edges;
    for (int e = 0; e < m; ++e) {
        std::vector<std::string> members;
        for (int i = 0; i < n; ++i) {
            if (rng.below(2) == 0) {
                members.push_back(atoms[static_cast<std::size_t>(i)]);
            }
        }
        if (members.empty()) {
            members.push_back(atoms[rng.below(static_cast<std::uint64_t>(n))]);
        }
        edges.push_back(mmk::Edge{"e" + std::to_string(e), members, false});
    }
    return mmk::build_world(atoms, edges);
}

} // namespace

TEST_CASE("build_world keeps declaration order", "[worldmodel]") {
    const mmk::World world = small_world();
    REQUIRE(world.atoms == std::vector<std::string>{"m1", "m2", "m3"});
    REQUIRE(world.edge_ids() == std::vector<std::string>{"r1", "r2"});
    REQUIRE(world.has_atom("m2"));
    REQUIRE_FALSE(world.has_atom("mX"));
    REQUIRE(world.find_edge("r2") != nullptr);
    REQUIRE(world.find_edge("r9") == nullptr);
}

TEST_CASE("build_world accepts a degenerate world without edges", "[worldmodel]") {
    const mmk::World world = mmk::build_world({"a"}, {});
    REQUIRE(world.atoms.size() == 1);
    REQUIRE(world.edges.empty());
    REQUIRE(mmk::eval_predicate_def(world, mmk::PredicateDef::always_true()).empty());
}

TEST_CASE("build_world rejects malformed input", "[worldmodel]") {
    REQUIRE_THROWS_AS(mmk::build_world({}, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(mmk::build_world({"a", "a"}, {}), std::invalid_argument);
    REQUIRE_THROWS_WITH(
        mmk::build_world({"m1"}, {mmk::Edge{"r1", {"m1", "mX"}, false}}),
        ContainsSubstring("undeclared atom"));
    REQUIRE_THROWS_AS(mmk::build_world({"a"}, {mmk::Edge{"e", {}, false}}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(
        mmk::build_world({"a", "b", "c"}, {mmk::Edge{"e", {"a", "b", "c"}, true}}),
        std::invalid_argument);
    REQUIRE_THROWS_AS(
        mmk::build_world({"a"}, {mmk::Edge{"e", {"a"}, false}, mmk::Edge{"e", {"a"}, false}}),
        std::invalid_argument);
    // edge id clashing with an atom id
    REQUIRE_THROWS_AS(mmk::build_world({"a"}, {mmk::Edge{"a", {"a"}, false}}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(mmk::build_world({"a"}, {}, {{"ghost", {{"phi", 1.0}}}}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(
        mmk::build_world({"a"}, {}, {}, {{"q", mmk::PredicateDef::explicit_edges({"ghost"})}}),
        std::invalid_argument);
}

TEST_CASE("ordered edges expose cause and effect", "[worldmodel]") {
    const mmk::World world =
        mmk::build_world({"a", "b"}, {mmk::Edge{"s", {"a", "b"}, true}});
    REQUIRE(world.edges[0].cause() == "a");
    REQUIRE(world.edges[0].effect() == "b");
}

TEST_CASE("predicate evaluation follows each kind", "[worldmodel]") {
    const mmk::World world = small_world();

    SECTION("always-true selects every edge") {
        REQUIRE(mmk::eval_predicate_def(world, mmk::PredicateDef::always_true()) ==
                std::vector<std::string>{"r1", "r2"});
    }
    SECTION("always-false selects none") {
        REQUIRE(mmk::eval_predicate_def(world, mmk::PredicateDef::always_false()).empty());
    }
    SECTION("attribute threshold is strict") {
        REQUIRE(mmk::eval_predicate_def(
                    world, mmk::PredicateDef::attribute_threshold("phi", 0.5)) ==
                std::vector<std::string>{"r1"});
        // boundary: 0.7 > 0.7 is false
        REQUIRE(mmk::eval_predicate_def(
                    world, mmk::PredicateDef::attribute_threshold("phi", 0.7))
                    .empty());
    }
    SECTION("explicit list keeps declaration order and drops nothing else") {
        REQUIRE(mmk::eval_predicate_def(world, mmk::PredicateDef::explicit_edges({"r2"})) ==
                std::vector<std::string>{"r2"});
        REQUIRE(mmk::eval_predicate_def(world,
                                        mmk::PredicateDef::explicit_edges({"r2", "r1"})) ==
                std::vector<std::string>{"r1", "r2"});
    }
    SECTION("threshold over a missing attribute is an error") {
        REQUIRE_THROWS_WITH(mmk::eval_predicate_def(
                                world, mmk::PredicateDef::attribute_threshold("psi", 0.0)),
                            ContainsSubstring("no attribute 'psi'"));
    }
}

TEST_CASE("named predicates resolve through the world", "[worldmodel]") {
    mmk::World world = mmk::build_world(
        {"m1", "m2"}, {mmk::Edge{"r1", {"m1"}, false}}, {},
        {{"q", mmk::PredicateDef::explicit_edges({"r1"})}});
    REQUIRE(mmk::eval_predicate(world, "q") == std::vector<std::string>{"r1"});
    REQUIRE_THROWS_WITH(mmk::eval_predicate(world, "nope"),
                        ContainsSubstring("unknown predicate"));
}

TEST_CASE("attribute lookup returns optionals", "[worldmodel]") {
    const mmk::World world = small_world();
    REQUIRE(world.attribute("r1", "phi") == 0.7);
    REQUIRE_FALSE(world.attribute("r1", "psi").has_value());
    REQUIRE_FALSE(world.attribute("r9", "phi").has_value());
}

TEST_CASE("predicate evaluation is pure and stays inside the edge set", "[worldmodel]") {
    mmk::Rng rng(20260813);
    for (int iter = 0; iter < 50; ++iter) {
        const mmk::World world = random_world(rng);
        const auto ids = world.edge_ids();

        const auto all = mmk::eval_predicate_def(world, mmk::PredicateDef::always_true());
        REQUIRE(all == ids);
        REQUIRE(mmk::eval_predicate_def(world, mmk::PredicateDef::always_false()).empty());

        // a random explicit predicate over declared edges
        std::vector<std::string> wanted;
        for (const auto& id : ids) {
            if (rng.below(2) == 0) {
                wanted.push_back(id);
            }
        }
        const auto def = mmk::PredicateDef::explicit_edges(wanted);
        const auto first = mmk::eval_predicate_def(world, def);
        const auto second = mmk::eval_predicate_def(world, def);
        REQUIRE(first == second);
        for (const auto& id : first) {
            REQUIRE(mmk::contains(ids, id));
        }
    }
}
