#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "mmk/rng.hpp"
#include "mmk/theoryzoo.hpp"

using Catch::Matchers::ContainsSubstring;
using mmk::TheoryFamily;

namespace {

mmk::World zoo_world() {
    return mmk::build_world(
        {"m1", "m2", "m3"},
        {mmk::Edge{"r1", {"m1", "m2"}, false}, mmk::Edge{"r2", {"m2", "m3"}, false}},
        {{"r1", {{"phi", 0.7}}}, {"r2", {{"phi", 0.2}}}},
        {{"q1", mmk::PredicateDef::explicit_edges({"r1"})},
         {"q2", mmk::PredicateDef::explicit_edges({"r2"})},
         {"qall", mmk::PredicateDef::always_true()},
         {"qnone", mmk::PredicateDef::always_false()}});
}

mmk::World directed_pair() {
    return mmk::build_world(
        {"a", "b"}, {mmk::Edge{"s1", {"a", "b"}, true}, mmk::Edge{"s2", {"b", "a"}, true}});
}

bool has_family(const mmk::Classification& c, TheoryFamily f) {
    return std::find(c.families.begin(), c.families.end(), f) != c.families.end();
}

} // namespace

TEST_CASE("family names are stable and distinct", "[theoryzoo]") {
    std::set<std::string> names;
    for (const auto family : mmk::all_theory_families()) {
        names.insert(mmk::to_string(family));
    }
    REQUIRE(names.size() == 10);
    REQUIRE(names.count("materialism") == 1);
    REQUIRE(names.count("neutral_monism") == 1);
    REQUIRE(names.count("interactionist_dualism") == 1);
}

TEST_CASE("materialism derives its mental set from Q", "[theoryzoo]") {
    const mmk::World world = zoo_world();
    mmk::TheoryOptions options;
    options.q = "q1";
    const auto inst = mmk::instantiate_theory(TheoryFamily::Materialism, world, options);
    REQUIRE(inst.material == world.atoms);
    REQUIRE(inst.mental == std::vector<std::string>{"r1"});

    REQUIRE_THROWS_WITH(mmk::instantiate_theory(TheoryFamily::Materialism, world, {}),
                        ContainsSubstring("requires predicate option Q"));
}

TEST_CASE("panpsychism promotes every relation to the mental set", "[theoryzoo]") {
    const mmk::World world = zoo_world();
    const auto inst = mmk::instantiate_theory(TheoryFamily::Panpsychism, world);
    REQUIRE(inst.mental == std::vector<std::string>{"r1", "r2"});
    REQUIRE(inst.material == world.atoms);
}

TEST_CASE("neutral monism evaluates both predicates over the same base", "[theoryzoo]") {
    const mmk::World world = zoo_world();
    mmk::TheoryOptions options;
    options.q_mental = "q1";
    options.q_material = "q2";
    const auto inst = mmk::instantiate_theory(TheoryFamily::NeutralMonism, world, options);
    REQUIRE(inst.mental == std::vector<std::string>{"r1"});
    REQUIRE(inst.material == std::vector<std::string>{"r2"});

    mmk::TheoryOptions missing;
    missing.q_mental = "q1";
    REQUIRE_THROWS_AS(mmk::instantiate_theory(TheoryFamily::NeutralMonism, world, missing),
                      std::invalid_argument);
}

TEST_CASE("solipsism and hard illusionism are one-sided", "[theoryzoo]") {
    const mmk::World world = zoo_world();
    const auto sol = mmk::instantiate_theory(TheoryFamily::Solipsism, world);
    REQUIRE(sol.mental == world.atoms);
    REQUIRE(sol.material.empty());

    const auto ill = mmk::instantiate_theory(TheoryFamily::IllusionismHard, world);
    REQUIRE(ill.material == world.atoms);
    REQUIRE(ill.mental.empty());
}

TEST_CASE("idealism mirrors materialism", "[theoryzoo]") {
    const mmk::World world = zoo_world();
    mmk::TheoryOptions options;
    options.q = "qall";
    const auto inst = mmk::instantiate_theory(TheoryFamily::Idealism, world, options);
    REQUIRE(inst.mental == world.atoms);
    REQUIRE(inst.material == std::vector<std::string>{"r1", "r2"});
}

TEST_CASE("iit selects relations above the threshold", "[theoryzoo]") {
    const mmk::World world = zoo_world();
    mmk::TheoryOptions options;
    options.tau = 0.5;
    const auto inst = mmk::instantiate_theory(TheoryFamily::IIT, world, options);
    REQUIRE(inst.mental == std::vector<std::string>{"r1"});
    REQUIRE(inst.material == world.atoms);

    // agreement with a direct threshold predicate
    REQUIRE(inst.mental ==
            mmk::eval_predicate_def(world, mmk::PredicateDef::attribute_threshold("phi", 0.5)));

    SECTION("threshold is strict") {
        mmk::TheoryOptions boundary;
        boundary.tau = 0.7;
        REQUIRE(mmk::instantiate_theory(TheoryFamily::IIT, world, boundary).mental.empty());
    }
    SECTION("tau is mandatory and must be finite") {
        REQUIRE_THROWS_WITH(mmk::instantiate_theory(TheoryFamily::IIT, world, {}),
                            ContainsSubstring("tau"));
        mmk::TheoryOptions bad;
        bad.tau = std::numeric_limits<double>::infinity();
        REQUIRE_THROWS_AS(mmk::instantiate_theory(TheoryFamily::IIT, world, bad),
                          std::invalid_argument);
    }
    SECTION("an edge without the score attribute is an error") {
        const mmk::World bare =
            mmk::build_world({"x", "y"}, {mmk::Edge{"e", {"x", "y"}, false}});
        mmk::TheoryOptions opts;
        opts.tau = 0.0;
        REQUIRE_THROWS_AS(mmk::instantiate_theory(TheoryFamily::IIT, bare, opts),
                          std::invalid_argument);
    }
}

TEST_CASE("iit_predicate compares strictly and rejects non-finite input", "[theoryzoo]") {
    REQUIRE(mmk::iit_predicate(0.7, 0.5));
    REQUIRE_FALSE(mmk::iit_predicate(0.5, 0.5));
    REQUIRE(mmk::iit_predicate(0.1, 0.0));
    REQUIRE_THROWS_AS(mmk::iit_predicate(std::nan(""), 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(mmk::iit_predicate(1.0, std::numeric_limits<double>::infinity()),
                      std::invalid_argument);
}

TEST_CASE("russellian views collect in and out edges per atom", "[theoryzoo]") {
    SECTION("symmetric pair") {
        const auto views = mmk::russellian_views(directed_pair());
        REQUIRE(views.causal.size() == 2);
        REQUIRE(views.causal[0].first == "a");
        REQUIRE(views.causal[0].second == std::vector<std::string>{"s1"});
        REQUIRE(views.perspective[0].second == std::vector<std::string>{"s2"});
        REQUIRE(views.causal[1].second == std::vector<std::string>{"s2"});
        REQUIRE(views.perspective[1].second == std::vector<std::string>{"s1"});
    }
    SECTION("a single edge leaves a source and a sink with empty views") {
        const mmk::World world =
            mmk::build_world({"a", "b"}, {mmk::Edge{"e", {"a", "b"}, true}});
        const auto views = mmk::russellian_views(world);
        REQUIRE(views.perspective[0].second.empty());  // W(a)
        REQUIRE(views.causal[1].second.empty());       // V(b)
    }
    SECTION("no edges means every view is empty but present") {
        const mmk::World world = mmk::build_world({"a"}, {});
        const auto views = mmk::russellian_views(world);
        REQUIRE(views.causal.size() == 1);
        REQUIRE(views.causal[0].second.empty());
        REQUIRE(views.perspective[0].second.empty());
    }
    SECTION("unordered edges are rejected") {
        const mmk::World world =
            mmk::build_world({"a", "b"}, {mmk::Edge{"e", {"a", "b"}, false}});
        REQUIRE_THROWS_AS(mmk::russellian_views(world), std::invalid_argument);
    }
}

TEST_CASE("view incidences partition the edge set", "[theoryzoo]") {
    mmk::Rng rng(97);
    for (int iter = 0; iter < 40; ++iter) {
        const int n = 1 + static_cast<int>(rng.below(6));
        std::vector<std::string> atoms;
        for (int i = 0; i < n; ++i) {
            atoms.push_back("a" + std::to_string(i));
        }
        std::vector<mmk::Edge> edges;
        int k = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (rng.below(3) == 0) {
                    edges.push_back(mmk::Edge{"e" + std::to_string(k++),
                                              {atoms[static_cast<std::size_t>(i)],
                                               atoms[static_cast<std::size_t>(j)]},
                                              true});
                }
            }
        }
        const mmk::World world = mmk::build_world(atoms, edges);
        const auto views = mmk::russellian_views(world);
        std::size_t causal_total = 0;
        std::size_t perspective_total = 0;
        for (const auto& [atom, ids] : views.causal) {
            causal_total += ids.size();
        }
        for (const auto& [atom, ids] : views.perspective) {
            perspective_total += ids.size();
        }
        REQUIRE(causal_total == edges.size());
        REQUIRE(perspective_total == edges.size());
    }
}

TEST_CASE("russellian instances expose view ids on both sides", "[theoryzoo]") {
    const auto inst = mmk::instantiate_theory(TheoryFamily::Russellian, directed_pair());
    REQUIRE(inst.material == std::vector<std::string>{"V(a)", "V(b)"});
    REQUIRE(inst.mental == std::vector<std::string>{"W(a)", "W(b)"});
    REQUIRE(inst.views.at("V(a)") == std::vector<std::string>{"s1"});
    REQUIRE(inst.views.at("W(b)") == std::vector<std::string>{"s1"});
}

TEST_CASE("dualisms validate their supplied sets", "[theoryzoo]") {
    const mmk::World world = zoo_world();

    SECTION("naive dualism needs disjoint sets and no links") {
        mmk::TheoryOptions options;
        options.mental = {"m1"};
        options.material = {"m2", "m3"};
        const auto inst = mmk::instantiate_theory(TheoryFamily::DualismNaive, world, options);
        const auto check = mmk::check_dualism(inst);
        REQUIRE(check.disjoint);
        REQUIRE(check.link_count == 0);

        options.links = {{"m1", "m2"}};
        REQUIRE_THROWS_WITH(
            mmk::instantiate_theory(TheoryFamily::DualismNaive, world, options),
            ContainsSubstring("no links"));
    }
    SECTION("overlap is rejected at construction") {
        mmk::TheoryOptions options;
        options.mental = {"m1"};
        options.material = {"m1", "m2"};
        REQUIRE_THROWS_WITH(
            mmk::instantiate_theory(TheoryFamily::DualismNaive, world, options),
            ContainsSubstring("disjoint"));
    }
    SECTION("members must be declared atoms") {
        mmk::TheoryOptions options;
        options.mental = {"ghost"};
        options.material = {"m2"};
        REQUIRE_THROWS_AS(mmk::instantiate_theory(TheoryFamily::DualismNaive, world, options),
                          std::invalid_argument);
    }
    SECTION("interactionist links must cross the divide") {
        mmk::TheoryOptions options;
        options.mental = {"m1"};
        options.material = {"m2"};
        options.links = {{"m2", "m1"}};
        const auto inst =
            mmk::instantiate_theory(TheoryFamily::DualismInteractionist, world, options);
        REQUIRE(mmk::check_dualism(inst).link_count == 1);

        options.links = {{"m1", "m1"}};
        REQUIRE_THROWS_WITH(
            mmk::instantiate_theory(TheoryFamily::DualismInteractionist, world, options),
            ContainsSubstring("cross"));
    }
    SECTION("check_dualism sees through hand-built violations") {
        mmk::TheoryInstance broken;
        broken.world = world;
        broken.family = TheoryFamily::DualismNaive;
        broken.mental = {"m1"};
        broken.material = {"m1"};
        REQUIRE_FALSE(mmk::check_dualism(broken).disjoint);
    }
    SECTION("check_dualism rejects non-dualist instances") {
        const auto sol = mmk::instantiate_theory(TheoryFamily::Solipsism, world);
        REQUIRE_THROWS_AS(mmk::check_dualism(sol), std::invalid_argument);
    }
}

TEST_CASE("classify_structure reports every matching family", "[theoryzoo]") {
    const mmk::World world = zoo_world();

    SECTION("an always-true materialist Q is structurally panpsychist") {
        mmk::TheoryOptions options;
        options.q = "qall";
        const auto inst = mmk::instantiate_theory(TheoryFamily::Materialism, world, options);
        const auto c = mmk::classify_structure(inst);
        REQUIRE(has_family(c, TheoryFamily::Materialism));
        REQUIRE(has_family(c, TheoryFamily::Panpsychism));
        REQUIRE_FALSE(c.notes.empty());
    }
    SECTION("solipsism is recognized, with its idealist reading noted") {
        const auto c =
            mmk::classify_structure(mmk::instantiate_theory(TheoryFamily::Solipsism, world));
        REQUIRE(has_family(c, TheoryFamily::Solipsism));
        REQUIRE(has_family(c, TheoryFamily::Idealism));
    }
    SECTION("hard illusionism doubles as undiscriminating materialism") {
        const auto c = mmk::classify_structure(
            mmk::instantiate_theory(TheoryFamily::IllusionismHard, world));
        REQUIRE(has_family(c, TheoryFamily::IllusionismHard));
        REQUIRE(has_family(c, TheoryFamily::Materialism));
    }
    SECTION("plain families re-derive themselves") {
        mmk::TheoryOptions mat;
        mat.q = "q1";
        REQUIRE(has_family(mmk::classify_structure(mmk::instantiate_theory(
                               TheoryFamily::Materialism, world, mat)),
                           TheoryFamily::Materialism));

        mmk::TheoryOptions neutral;
        neutral.q_mental = "q1";
        neutral.q_material = "q2";
        REQUIRE(has_family(mmk::classify_structure(mmk::instantiate_theory(
                               TheoryFamily::NeutralMonism, world, neutral)),
                           TheoryFamily::NeutralMonism));

        mmk::TheoryOptions dual;
        dual.mental = {"m1"};
        dual.material = {"m2"};
        REQUIRE(has_family(mmk::classify_structure(mmk::instantiate_theory(
                               TheoryFamily::DualismNaive, world, dual)),
                           TheoryFamily::DualismNaive));
        dual.links = {{"m1", "m2"}};
        REQUIRE(has_family(mmk::classify_structure(mmk::instantiate_theory(
                               TheoryFamily::DualismInteractionist, world, dual)),
                           TheoryFamily::DualismInteractionist));
    }
    SECTION("russellian instances read as views-based neutral monism") {
        const auto c = mmk::classify_structure(
            mmk::instantiate_theory(TheoryFamily::Russellian, directed_pair()));
        REQUIRE(has_family(c, TheoryFamily::Russellian));
        REQUIRE(has_family(c, TheoryFamily::NeutralMonism));
    }
}

TEST_CASE("mirror_dual swaps the two sets and the family tag", "[theoryzoo]") {
    const mmk::World world = zoo_world();
    mmk::TheoryOptions options;
    options.q = "q1";
    const auto mat = mmk::instantiate_theory(TheoryFamily::Materialism, world, options);
    const auto ideal = mmk::mirror_dual(mat);
    REQUIRE(ideal.family == TheoryFamily::Idealism);
    REQUIRE(ideal.mental == mat.material);
    REQUIRE(ideal.material == mat.mental);
    REQUIRE(has_family(mmk::classify_structure(ideal), TheoryFamily::Idealism));

    const auto back = mmk::mirror_dual(ideal);
    REQUIRE(back.family == TheoryFamily::Materialism);
    REQUIRE(back.mental == mat.mental);

    REQUIRE_THROWS_AS(
        mmk::mirror_dual(mmk::instantiate_theory(TheoryFamily::Solipsism, world)),
        std::invalid_argument);
}

TEST_CASE("instantiation invariants hold over random worlds", "[theoryzoo]") {
    mmk::Rng rng(311);
    for (int iter = 0; iter < 30; ++iter) {
        const int n = 2 + static_cast<int>(rng.below(5));
        std::vector<std::string> atoms;
        for (int i = 0; i < n; ++i) {
            atoms.push_back("a" + std::to_string(i));
        }
        std::vector<mmk::Edge> edges;
        const int m = 1 + static_cast<int>(rng.below(4));
        for (int e = 0; e < m; ++e) {
            std::vector<std::string> members;
            for (int i = 0; i < n; ++i) {
                if (rng.below(2) == 0) {
                    members.push_back(atoms[static_cast<std::size_t>(i)]);
                }
            }
            if (members.empty()) {
                members.push_back(atoms[0]);
            }
            edges.push_back(mmk::Edge{"e" + std::to_string(e), members, false});
        }
        const mmk::World world = mmk::build_world(atoms, edges);

        REQUIRE(mmk::instantiate_theory(TheoryFamily::Panpsychism, world).mental ==
                world.edge_ids());
        const auto sol = mmk::instantiate_theory(TheoryFamily::Solipsism, world);
        REQUIRE((sol.mental == world.atoms && sol.material.empty()));
        const auto ill = mmk::instantiate_theory(TheoryFamily::IllusionismHard, world);
        REQUIRE((ill.material == world.atoms && ill.mental.empty()));

        mmk::TheoryOptions dual;
        dual.mental = {atoms[0]};
        dual.material = {atoms[1]};
        const auto naive = mmk::instantiate_theory(TheoryFamily::DualismNaive, world, dual);
        REQUIRE(mmk::id_intersection(naive.mental, naive.material).empty());
    }
}
