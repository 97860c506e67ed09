// Finite maps between the mental and material sides of a theory instance,
// round-trip image classification, and the family/class compatibility table.
#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mmk/sets.hpp"
#include "mmk/theoryzoo.hpp"
#include "mmk/worldmodel.hpp"

namespace mmk {

enum class EquivalenceClass {
    FullEquivalence,
    PartialEquivalenceMaterial,
    PartialEquivalenceMental,
    MutualNonEquivalence,
};

inline std::string to_string(EquivalenceClass cls) {
    switch (cls) {
    case EquivalenceClass::FullEquivalence: return "full_equivalence";
    case EquivalenceClass::PartialEquivalenceMaterial: return "partial_equivalence_material";
    case EquivalenceClass::PartialEquivalenceMental: return "partial_equivalence_mental";
    case EquivalenceClass::MutualNonEquivalence: return "mutual_non_equivalence";
    }
    return "unknown";
}

// Total map between two finite id sets. `source` and `target` keep their
// declaration order; `mapping` must cover every source id.
struct FiniteMap {
    std::vector<std::string> source;
    std::vector<std::string> target;
    std::map<std::string, std::string> mapping;
};

inline FiniteMap make_map(std::vector<std::string> source, std::vector<std::string> target,
                          const std::vector<std::pair<std::string, std::string>>& pairs) {
    const auto has_duplicates = [](std::vector<std::string> ids) {
        std::sort(ids.begin(), ids.end());
        return std::adjacent_find(ids.begin(), ids.end()) != ids.end();
    };
    if (has_duplicates(source)) {
        throw std::invalid_argument("make_map: duplicate id in source");
    }
    if (has_duplicates(target)) {
        throw std::invalid_argument("make_map: duplicate id in target");
    }
    FiniteMap map;
    map.source = std::move(source);
    map.target = std::move(target);
    for (const auto& [from, to] : pairs) {
        if (!contains(map.source, from)) {
            throw std::invalid_argument("make_map: '" + from + "' is not in the source set");
        }
        if (!contains(map.target, to)) {
            throw std::invalid_argument("make_map: '" + to + "' is not in the target set");
        }
        if (!map.mapping.emplace(from, to).second) {
            throw std::invalid_argument("make_map: '" + from + "' is mapped twice");
        }
    }
    for (const auto& id : map.source) {
        if (map.mapping.find(id) == map.mapping.end()) {
            throw std::invalid_argument("make_map: source id '" + id + "' has no image");
        }
    }
    return map;
}

// Image of a subset under the map, deduplicated and emitted in target
// declaration order.
inline std::vector<std::string> image(const FiniteMap& map, const std::vector<std::string>& subset) {
    std::vector<std::string> hit;
    for (const auto& id : subset) {
        const auto it = map.mapping.find(id);
        if (it == map.mapping.end()) {
            throw std::invalid_argument("image: '" + id + "' is not in the map source");
        }
        hit.push_back(it->second);
    }
    std::vector<std::string> out;
    for (const auto& id : map.target) {
        if (contains(hit, id) && !contains(out, id)) {
            out.push_back(id);
        }
    }
    return out;
}

inline bool is_bijection(const FiniteMap& map) {
    if (map.source.size() != map.target.size()) {
        return false;
    }
    std::vector<std::string> values;
    values.reserve(map.mapping.size());
    for (const auto& [from, to] : map.mapping) {
        (void)from;
        values.push_back(to);
    }
    std::sort(values.begin(), values.end());
    return std::adjacent_find(values.begin(), values.end()) == values.end();
}

// F maps the mental side into the material one, G the reverse. The class is
// decided by which round trips are image-complete: F then G recovering all of
// F.source means the mental side survives translation, G then F recovering
// all of G.source means the material side does.
struct EquivalenceReport {
    EquivalenceClass cls = EquivalenceClass::MutualNonEquivalence;
    std::vector<std::string> image_gf;  // (G after F)(F.source), a mental subset
    std::vector<std::string> image_fg;  // (F after G)(G.source), a material subset
    bool mental_recovered = false;
    bool material_recovered = false;
    std::vector<std::string> notes;
};

inline EquivalenceReport classify_equivalence(const FiniteMap& f, const FiniteMap& g) {
    if (!same_set(f.source, g.target) || !same_set(g.source, f.target)) {
        throw std::invalid_argument("classify_equivalence: maps do not run between the same two sets");
    }
    EquivalenceReport report;
    report.image_gf = image(g, image(f, f.source));
    report.image_fg = image(f, image(g, g.source));
    report.mental_recovered = same_set(report.image_gf, f.source);
    report.material_recovered = same_set(report.image_fg, g.source);
    if (report.mental_recovered && report.material_recovered) {
        report.cls = EquivalenceClass::FullEquivalence;
    } else if (report.mental_recovered) {
        report.cls = EquivalenceClass::PartialEquivalenceMaterial;
    } else if (report.material_recovered) {
        report.cls = EquivalenceClass::PartialEquivalenceMental;
    } else {
        report.cls = EquivalenceClass::MutualNonEquivalence;
    }
    if (is_bijection(f) && is_bijection(g)) {
        bool inverse = true;
        for (const auto& [from, to] : f.mapping) {
            const auto it = g.mapping.find(to);
            if (it == g.mapping.end() || it->second != from) {
                inverse = false;
                break;
            }
        }
        if (inverse) {
            report.notes.push_back("maps are mutually inverse bijections; the two sides are isomorphic");
        }
    }
    return report;
}

// Short interpretive label for a class.
inline std::string reading(EquivalenceClass cls) {
    switch (cls) {
    case EquivalenceClass::FullEquivalence:
        return "each side recovers the other; dual-aspect reading available";
    case EquivalenceClass::PartialEquivalenceMaterial:
        return "the material description subsumes the mental one";
    case EquivalenceClass::PartialEquivalenceMental:
        return "the mental description subsumes the material one";
    case EquivalenceClass::MutualNonEquivalence:
        return "neither description subsumes the other";
    }
    return "";
}

// Dual-aspect check for a neutral base: fp maps the base onto the mental
// side, gp onto the material side. Coverage means the aspect map is
// surjective onto its target.
struct NeutralCoverage {
    bool mental_covered = false;
    bool material_covered = false;
    bool dual_aspect = false;
};

inline NeutralCoverage neutral_coverage(const FiniteMap& fp, const FiniteMap& gp) {
    if (!same_set(fp.source, gp.source)) {
        throw std::invalid_argument("neutral_coverage: aspect maps must share their source");
    }
    NeutralCoverage cov;
    cov.mental_covered = same_set(image(fp, fp.source), fp.target);
    cov.material_covered = same_set(image(gp, gp.source), gp.target);
    cov.dual_aspect = cov.mental_covered && cov.material_covered;
    return cov;
}

// Equivalence over the view families of an ordered-edge world. An atom is
// recovered when its outgoing and incoming neighbourhoods coincide, i.e. its
// causal view is the edge-reversal of its perspective view; every atom
// recovered is the same as the relation being symmetric, and then the two
// view families carry identical content.
struct RussellianEquivalenceReport {
    EquivalenceClass cls = EquivalenceClass::MutualNonEquivalence;
    std::vector<std::string> recovered;
    std::vector<std::string> unrecovered;
};

inline RussellianEquivalenceReport russellian_equivalence(const World& world) {
    for (const auto& e : world.edges) {
        if (!e.ordered) {
            throw std::invalid_argument("russellian_equivalence: edge '" + e.id + "' is not ordered");
        }
    }
    RussellianEquivalenceReport report;
    for (const auto& atom : world.atoms) {
        std::vector<std::string> out_neighbours;
        std::vector<std::string> in_neighbours;
        for (const auto& e : world.edges) {
            if (e.cause() == atom) {
                out_neighbours.push_back(e.effect());
            }
            if (e.effect() == atom) {
                in_neighbours.push_back(e.cause());
            }
        }
        std::sort(out_neighbours.begin(), out_neighbours.end());
        std::sort(in_neighbours.begin(), in_neighbours.end());
        if (out_neighbours == in_neighbours) {
            report.recovered.push_back(atom);
        } else {
            report.unrecovered.push_back(atom);
        }
    }
    report.cls = report.unrecovered.empty() ? EquivalenceClass::FullEquivalence
                                            : EquivalenceClass::MutualNonEquivalence;
    return report;
}

// Which equivalence classes each family can live with. Families that ground
// everything on one side tolerate the partial class favouring that side;
// views-based and dualist families make no commitment either way.
struct CompatibilityMatrix {
    bool permits(TheoryFamily family, EquivalenceClass cls) const {
        if (cls == EquivalenceClass::FullEquivalence) {
            return true;
        }
        switch (family) {
        case TheoryFamily::Materialism:
        case TheoryFamily::IIT:
        case TheoryFamily::IllusionismHard:
            return cls == EquivalenceClass::PartialEquivalenceMaterial;
        case TheoryFamily::Idealism:
        case TheoryFamily::Solipsism:
            return cls == EquivalenceClass::PartialEquivalenceMental;
        case TheoryFamily::Panpsychism:
            return false;
        case TheoryFamily::NeutralMonism:
        case TheoryFamily::Russellian:
        case TheoryFamily::DualismNaive:
        case TheoryFamily::DualismInteractionist:
            return true;
        }
        return false;
    }

    std::vector<EquivalenceClass> permitted(TheoryFamily family) const {
        std::vector<EquivalenceClass> out;
        for (const auto cls : {EquivalenceClass::FullEquivalence,
                               EquivalenceClass::PartialEquivalenceMaterial,
                               EquivalenceClass::PartialEquivalenceMental,
                               EquivalenceClass::MutualNonEquivalence}) {
            if (permits(family, cls)) {
                out.push_back(cls);
            }
        }
        return out;
    }
};

inline CompatibilityMatrix compatibility_matrix() { return CompatibilityMatrix{}; }

struct MatrixCheck {
    EquivalenceClass cls = EquivalenceClass::MutualNonEquivalence;
    bool consistent = false;
    std::string annotation;
};

inline MatrixCheck check_instance_against_matrix(const TheoryInstance& instance,
                                                 const FiniteMap& f, const FiniteMap& g) {
    const EquivalenceReport report = classify_equivalence(f, g);
    MatrixCheck check;
    check.cls = report.cls;
    check.consistent = compatibility_matrix().permits(instance.family, report.cls);
    check.annotation = reading(report.cls);
    return check;
}

} // namespace mmk
