// Constructors and structural classifiers for the theory families: each
// family derives its mental and material sets from a World by its own rule.
#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mmk/worldmodel.hpp"

namespace mmk {

enum class TheoryFamily {
    Solipsism,
    Materialism,
    Panpsychism,
    IIT,
    IllusionismHard,
    Idealism,
    NeutralMonism,
    Russellian,
    DualismNaive,
    DualismInteractionist,
};

inline const std::vector<TheoryFamily>& all_theory_families() {
    static const std::vector<TheoryFamily> families = {
        TheoryFamily::Solipsism,      TheoryFamily::Materialism,
        TheoryFamily::Panpsychism,    TheoryFamily::IIT,
        TheoryFamily::IllusionismHard, TheoryFamily::Idealism,
        TheoryFamily::NeutralMonism,  TheoryFamily::Russellian,
        TheoryFamily::DualismNaive,   TheoryFamily::DualismInteractionist,
    };
    return families;
}

inline std::string to_string(TheoryFamily family) {
    switch (family) {
    case TheoryFamily::Solipsism: return "solipsism";
    case TheoryFamily::Materialism: return "materialism";
    case TheoryFamily::Panpsychism: return "panpsychism";
    case TheoryFamily::IIT: return "iit";
    case TheoryFamily::IllusionismHard: return "illusionism";
    case TheoryFamily::Idealism: return "idealism";
    case TheoryFamily::NeutralMonism: return "neutral_monism";
    case TheoryFamily::Russellian: return "russellian";
    case TheoryFamily::DualismNaive: return "naive_dualism";
    case TheoryFamily::DualismInteractionist: return "interactionist_dualism";
    }
    return "unknown";
}

// Mental/material can hold atom ids, edge ids, or view ids depending on the
// family. Russellian instances additionally carry the view contents.
struct TheoryInstance {
    World world;
    TheoryFamily family = TheoryFamily::Materialism;
    std::vector<std::string> mental;
    std::vector<std::string> material;
    std::vector<std::pair<std::string, std::string>> links;  // interactionist dualism
    std::map<std::string, std::vector<std::string>> views;   // view id -> edge ids (Russellian)
};

struct TheoryOptions {
    std::string q;           // predicate name: materialism / idealism
    std::string q_mental;    // Q_I: neutral monism
    std::string q_material;  // Q_M: neutral monism
    std::optional<double> tau;           // IIT threshold
    std::string phi_attribute = "phi";   // IIT attribute carrying the score
    std::vector<std::string> mental;     // dualisms: supplied atom sets
    std::vector<std::string> material;
    std::vector<std::pair<std::string, std::string>> links;
};

// Strict threshold test used by the IIT family.
inline bool iit_predicate(double phi, double tau) {
    if (!std::isfinite(phi) || !std::isfinite(tau)) {
        throw std::invalid_argument("iit_predicate: phi and tau must be finite");
    }
    return phi > tau;
}

// Per-atom view families over an ordered-edge world: the causal complex
// V(x) collects edges with cause x, the perspective W(y) edges with
// effect y. Atoms with no incident edges get empty views.
struct RussellianViews {
    // (atom, edge ids) in atom declaration order
    std::vector<std::pair<std::string, std::vector<std::string>>> causal;       // V(x)
    std::vector<std::pair<std::string, std::vector<std::string>>> perspective;  // W(y)
};

inline RussellianViews russellian_views(const World& world) {
    for (const auto& e : world.edges) {
        if (!e.ordered) {
            throw std::invalid_argument("russellian_views: edge '" + e.id + "' is not ordered");
        }
    }
    RussellianViews views;
    for (const auto& atom : world.atoms) {
        std::vector<std::string> out_edges;
        std::vector<std::string> in_edges;
        for (const auto& e : world.edges) {
            if (e.cause() == atom) {
                out_edges.push_back(e.id);
            }
            if (e.effect() == atom) {
                in_edges.push_back(e.id);
            }
        }
        views.causal.emplace_back(atom, std::move(out_edges));
        views.perspective.emplace_back(atom, std::move(in_edges));
    }
    return views;
}

inline std::string causal_view_id(const std::string& atom) { return "V(" + atom + ")"; }
inline std::string perspective_view_id(const std::string& atom) { return "W(" + atom + ")"; }

namespace detail {

inline void require_membership(const World& world, const std::vector<std::string>& ids,
                               const char* role) {
    for (const auto& id : ids) {
        if (!world.has_atom(id)) {
            throw std::invalid_argument(std::string("instantiate_theory: ") + role +
                                        " id '" + id + "' is not a declared atom");
        }
    }
}

} // namespace detail

inline TheoryInstance instantiate_theory(TheoryFamily family, const World& world,
                                         const TheoryOptions& options = {}) {
    TheoryInstance inst;
    inst.world = world;
    inst.family = family;

    const auto require_predicate = [&](const std::string& name, const char* which) {
        if (name.empty()) {
            throw std::invalid_argument(std::string("instantiate_theory: family requires predicate option ") + which);
        }
        return eval_predicate(world, name);
    };

    switch (family) {
    case TheoryFamily::Solipsism:
        inst.mental = world.atoms;
        break;
    case TheoryFamily::Materialism:
        inst.material = world.atoms;
        inst.mental = require_predicate(options.q, "Q");
        break;
    case TheoryFamily::Panpsychism:
        inst.material = world.atoms;
        inst.mental = world.edge_ids();
        break;
    case TheoryFamily::IIT: {
        if (!options.tau) {
            throw std::invalid_argument("instantiate_theory: iit requires option tau");
        }
        if (!std::isfinite(*options.tau)) {
            throw std::invalid_argument("instantiate_theory: tau must be finite");
        }
        inst.material = world.atoms;
        inst.mental = eval_predicate_def(
            world, PredicateDef::attribute_threshold(options.phi_attribute, *options.tau));
        break;
    }
    case TheoryFamily::IllusionismHard:
        inst.material = world.atoms;
        break;
    case TheoryFamily::Idealism:
        inst.mental = world.atoms;
        inst.material = require_predicate(options.q, "Q");
        break;
    case TheoryFamily::NeutralMonism:
        inst.mental = require_predicate(options.q_mental, "Q_I");
        inst.material = require_predicate(options.q_material, "Q_M");
        break;
    case TheoryFamily::Russellian: {
        const RussellianViews views = russellian_views(world);
        for (const auto& [atom, edges] : views.causal) {
            inst.material.push_back(causal_view_id(atom));
            inst.views[causal_view_id(atom)] = edges;
        }
        for (const auto& [atom, edges] : views.perspective) {
            inst.mental.push_back(perspective_view_id(atom));
            inst.views[perspective_view_id(atom)] = edges;
        }
        break;
    }
    case TheoryFamily::DualismNaive:
    case TheoryFamily::DualismInteractionist: {
        detail::require_membership(world, options.mental, "mental");
        detail::require_membership(world, options.material, "material");
        inst.mental = options.mental;
        inst.material = options.material;
        if (!id_intersection(inst.mental, inst.material).empty()) {
            throw std::invalid_argument("instantiate_theory: dualism requires disjoint mental and material sets");
        }
        if (family == TheoryFamily::DualismNaive) {
            if (!options.links.empty()) {
                throw std::invalid_argument("instantiate_theory: naive dualism admits no links");
            }
        } else {
            for (const auto& [from, to] : options.links) {
                const bool from_mental = contains(inst.mental, from);
                const bool from_material = contains(inst.material, from);
                const bool to_mental = contains(inst.mental, to);
                const bool to_material = contains(inst.material, to);
                if (!((from_mental && to_material) || (from_material && to_mental))) {
                    throw std::invalid_argument("instantiate_theory: link (" + from + ", " + to +
                                                ") must cross the mental/material divide");
                }
            }
            inst.links = options.links;
        }
        break;
    }
    }
    return inst;
}

struct DualismCheck {
    bool disjoint = false;
    std::size_t link_count = 0;
};

inline DualismCheck check_dualism(const TheoryInstance& instance) {
    if (instance.family != TheoryFamily::DualismNaive &&
        instance.family != TheoryFamily::DualismInteractionist) {
        throw std::invalid_argument("check_dualism: instance is not a dualism");
    }
    DualismCheck check;
    check.disjoint = id_intersection(instance.mental, instance.material).empty();
    check.link_count = instance.links.size();
    return check;
}

struct Classification {
    std::vector<TheoryFamily> families;
    std::vector<std::string> notes;
};

// Re-derives every family whose defining structure the instance satisfies.
// Ambiguity is intentional: some families coincide structurally (an
// always-true materialist predicate produces a panpsychist instance, an
// empty mental set makes hard illusionism a materialist special case, and
// solipsism is an idealist special case).
inline Classification classify_structure(const TheoryInstance& instance) {
    Classification result;
    const World& w = instance.world;
    const std::vector<std::string> edge_ids = w.edge_ids();
    const bool mental_all_atoms = same_set(instance.mental, w.atoms);
    const bool material_all_atoms = same_set(instance.material, w.atoms);
    const bool mental_edges = is_subset(instance.mental, edge_ids);
    const bool material_edges = is_subset(instance.material, edge_ids);
    const bool mental_atoms = is_subset(instance.mental, w.atoms);
    const bool material_atoms = is_subset(instance.material, w.atoms);
    const bool disjoint = id_intersection(instance.mental, instance.material).empty();

    const auto add = [&](TheoryFamily f) { result.families.push_back(f); };

    if (mental_all_atoms && instance.material.empty()) {
        add(TheoryFamily::Solipsism);
    }
    if (material_all_atoms && instance.mental.empty()) {
        add(TheoryFamily::IllusionismHard);
    }
    if (material_all_atoms && mental_edges) {
        add(TheoryFamily::Materialism);
        if (same_set(instance.mental, edge_ids) && !edge_ids.empty()) {
            add(TheoryFamily::Panpsychism);
            result.notes.push_back("mental set covers every relation; structurally panpsychist");
        }
    }
    if (mental_all_atoms && material_edges && !instance.material.empty()) {
        add(TheoryFamily::Idealism);
    } else if (mental_all_atoms && instance.material.empty()) {
        // solipsism case above; still the degenerate idealist shape
        add(TheoryFamily::Idealism);
        result.notes.push_back("empty material set; solipsism as degenerate idealism");
    }
    if (!instance.views.empty() && is_subset(instance.mental, [&] {
            std::vector<std::string> ids;
            for (const auto& [id, edges] : instance.views) {
                ids.push_back(id);
                (void)edges;
            }
            return ids;
        }())) {
        add(TheoryFamily::Russellian);
        add(TheoryFamily::NeutralMonism);
        result.notes.push_back("view families over an ordered graph; russellian neutral monism");
    } else if (mental_edges && material_edges && !mental_all_atoms && !material_all_atoms &&
               !instance.mental.empty() && !instance.material.empty()) {
        add(TheoryFamily::NeutralMonism);
    }
    if (mental_atoms && material_atoms && disjoint && !mental_all_atoms && !material_all_atoms &&
        !instance.mental.empty() && !instance.material.empty()) {
        if (instance.links.empty()) {
            add(TheoryFamily::DualismNaive);
        } else {
            add(TheoryFamily::DualismInteractionist);
        }
    }
    if (material_all_atoms && instance.mental.empty()) {
        result.notes.push_back("no mental discrimination; hard illusionism restates emergent materialism");
    }
    return result;
}

// Swaps the roles of the two sets, turning a materialist instance into the
// mirror idealist one and vice versa.
inline TheoryInstance mirror_dual(const TheoryInstance& instance) {
    if (instance.family != TheoryFamily::Materialism && instance.family != TheoryFamily::Idealism) {
        throw std::invalid_argument("mirror_dual: defined for materialism and idealism only");
    }
    TheoryInstance out = instance;
    out.family = instance.family == TheoryFamily::Materialism ? TheoryFamily::Idealism
                                                              : TheoryFamily::Materialism;
    std::swap(out.mental, out.material);
    return out;
}

} // namespace mmk
