// Finite substrate for theory construction: atoms, hyperedges over atoms,
// per-edge scalar attributes, and named predicates over edges.
//
// A World is immutable after build_world() and safe to share across
// concurrent readers. Iteration order is declaration order throughout, so
// every downstream report is deterministic.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "mmk/sets.hpp"

namespace mmk {

struct PredicateDef {
    enum class Kind { ExplicitEdges, AttributeThreshold, AlwaysTrue, AlwaysFalse };

    Kind kind = Kind::AlwaysFalse;
    std::vector<std::string> edges;  // ExplicitEdges
    std::string attribute;           // AttributeThreshold
    double threshold = 0.0;          // strict: attribute value must exceed it

    static PredicateDef explicit_edges(std::vector<std::string> ids) {
        PredicateDef def;
        def.kind = Kind::ExplicitEdges;
        def.edges = std::move(ids);
        return def;
    }
    static PredicateDef attribute_threshold(std::string attribute, double threshold) {
        PredicateDef def;
        def.kind = Kind::AttributeThreshold;
        def.attribute = std::move(attribute);
        def.threshold = threshold;
        return def;
    }
    static PredicateDef always_true() {
        PredicateDef def;
        def.kind = Kind::AlwaysTrue;
        return def;
    }
    static PredicateDef always_false() {
        PredicateDef def;
        def.kind = Kind::AlwaysFalse;
        return def;
    }
};

struct Edge {
    std::string id;
    std::vector<std::string> members;  // nonempty; exactly {cause, effect} when ordered
    bool ordered = false;

    const std::string& cause() const { return members[0]; }
    const std::string& effect() const { return members[1]; }
};

struct World {
    std::vector<std::string> atoms;
    std::vector<Edge> edges;
    // edge id -> attribute name -> value
    std::map<std::string, std::map<std::string, double>> attributes;
    std::map<std::string, PredicateDef> predicates;

    bool has_atom(const std::string& id) const { return contains(atoms, id); }

    const Edge* find_edge(const std::string& id) const {
        for (const auto& e : edges) {
            if (e.id == id) {
                return &e;
            }
        }
        return nullptr;
    }

    std::optional<double> attribute(const std::string& edge_id, const std::string& name) const {
        auto it = attributes.find(edge_id);
        if (it == attributes.end()) {
            return std::nullopt;
        }
        auto jt = it->second.find(name);
        if (jt == it->second.end()) {
            return std::nullopt;
        }
        return jt->second;
    }

    std::vector<std::string> edge_ids() const {
        std::vector<std::string> out;
        out.reserve(edges.size());
        for (const auto& e : edges) {
            out.push_back(e.id);
        }
        return out;
    }
};

// Validating constructor. Throws std::invalid_argument on duplicate ids,
// edges over undeclared atoms, ordered edges of arity != 2, attributes or
// explicit predicates referencing unknown edges.
inline World build_world(std::vector<std::string> atoms,
                         std::vector<Edge> edges,
                         std::map<std::string, std::map<std::string, double>> attributes = {},
                         std::map<std::string, PredicateDef> predicates = {}) {
    if (atoms.empty()) {
        throw std::invalid_argument("build_world: atom set must be nonempty");
    }
    std::unordered_set<std::string> atom_ids;
    for (const auto& a : atoms) {
        if (a.empty()) {
            throw std::invalid_argument("build_world: empty atom id");
        }
        if (!atom_ids.insert(a).second) {
            throw std::invalid_argument("build_world: duplicate atom id '" + a + "'");
        }
    }
    std::unordered_set<std::string> edge_ids;
    for (const auto& e : edges) {
        if (e.id.empty()) {
            throw std::invalid_argument("build_world: empty edge id");
        }
        if (atom_ids.count(e.id) != 0 || !edge_ids.insert(e.id).second) {
            throw std::invalid_argument("build_world: duplicate id '" + e.id + "'");
        }
        if (e.members.empty()) {
            throw std::invalid_argument("build_world: edge '" + e.id + "' has no members");
        }
        if (e.ordered && e.members.size() != 2) {
            throw std::invalid_argument("build_world: ordered edge '" + e.id +
                                        "' must be a (cause, effect) pair");
        }
        for (const auto& m : e.members) {
            if (atom_ids.count(m) == 0) {
                throw std::invalid_argument("build_world: edge '" + e.id +
                                            "' references undeclared atom '" + m + "'");
            }
        }
    }
    for (const auto& [edge_id, values] : attributes) {
        if (edge_ids.count(edge_id) == 0) {
            throw std::invalid_argument("build_world: attribute on unknown edge '" + edge_id + "'");
        }
        (void)values;
    }
    for (const auto& [name, def] : predicates) {
        if (def.kind == PredicateDef::Kind::ExplicitEdges) {
            for (const auto& id : def.edges) {
                if (edge_ids.count(id) == 0) {
                    throw std::invalid_argument("build_world: predicate '" + name +
                                                "' lists unknown edge '" + id + "'");
                }
            }
        }
    }
    World world;
    world.atoms = std::move(atoms);
    world.edges = std::move(edges);
    world.attributes = std::move(attributes);
    world.predicates = std::move(predicates);
    return world;
}

// Evaluates a predicate definition over every edge of the world. Result is
// the satisfying edge ids in declaration order.
inline std::vector<std::string> eval_predicate_def(const World& world, const PredicateDef& def) {
    std::vector<std::string> out;
    switch (def.kind) {
    case PredicateDef::Kind::AlwaysTrue:
        return world.edge_ids();
    case PredicateDef::Kind::AlwaysFalse:
        return out;
    case PredicateDef::Kind::ExplicitEdges:
        for (const auto& e : world.edges) {
            if (contains(def.edges, e.id)) {
                out.push_back(e.id);
            }
        }
        return out;
    case PredicateDef::Kind::AttributeThreshold:
        for (const auto& e : world.edges) {
            const auto value = world.attribute(e.id, def.attribute);
            if (!value) {
                throw std::invalid_argument("eval_predicate: edge '" + e.id +
                                            "' has no attribute '" + def.attribute + "'");
            }
            if (*value > def.threshold) {
                out.push_back(e.id);
            }
        }
        return out;
    }
    throw std::logic_error("eval_predicate: unknown predicate kind");
}

inline std::vector<std::string> eval_predicate(const World& world, const std::string& name) {
    auto it = world.predicates.find(name);
    if (it == world.predicates.end()) {
        throw std::invalid_argument("eval_predicate: unknown predicate '" + name + "'");
    }
    return eval_predicate_def(world, it->second);
}

} // namespace mmk
