// Concept spaces over a shared neuron pool: declared correlate sets, the
// compositional structure between them, and the generative sampling model
// for composed concepts.
#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mmk/rng.hpp"
#include "mmk/sets.hpp"

namespace mmk {

struct Composition {
    std::string a;
    std::string b;
    std::string result;
};

struct ConceptSpace {
    int neuron_count = 0;
    std::vector<std::string> concepts;                    // declaration order
    std::map<std::string, std::vector<int>> correlates;   // concept -> sorted indices
    std::vector<Composition> compositions;

    bool has_concept(const std::string& id) const {
        return correlates.find(id) != correlates.end();
    }
    const std::vector<int>& correlate(const std::string& id) const {
        const auto it = correlates.find(id);
        if (it == correlates.end()) {
            throw std::invalid_argument("correlate: unknown concept '" + id + "'");
        }
        return it->second;
    }
};

inline ConceptSpace make_concept_space(
    int neuron_count, const std::vector<std::pair<std::string, std::vector<int>>>& correlates) {
    if (neuron_count <= 0) {
        throw std::invalid_argument("make_concept_space: neuron_count must be positive");
    }
    ConceptSpace space;
    space.neuron_count = neuron_count;
    for (const auto& [id, indices] : correlates) {
        if (id.empty()) {
            throw std::invalid_argument("make_concept_space: empty concept id");
        }
        if (space.has_concept(id)) {
            throw std::invalid_argument("make_concept_space: duplicate concept '" + id + "'");
        }
        std::vector<int> sorted = indices;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("make_concept_space: duplicate index in concept '" + id + "'");
        }
        for (const int index : sorted) {
            if (index < 0 || index >= neuron_count) {
                throw std::invalid_argument("make_concept_space: index out of range in concept '" + id + "'");
            }
        }
        space.concepts.push_back(id);
        space.correlates.emplace(id, std::move(sorted));
    }
    return space;
}

// Records that `result` is the composition of `a` and `b`. All three must be
// declared concepts; a concept can be the result of at most one composition.
inline void compose_concept(ConceptSpace& space, const std::string& a, const std::string& b,
                            const std::string& result) {
    for (const auto* id : {&a, &b, &result}) {
        if (!space.has_concept(*id)) {
            throw std::invalid_argument("compose_concept: unknown concept '" + *id + "'");
        }
    }
    if (result == a || result == b) {
        throw std::invalid_argument("compose_concept: '" + result + "' cannot compose itself");
    }
    for (const auto& c : space.compositions) {
        if (c.result == result) {
            throw std::invalid_argument("compose_concept: '" + result + "' already has a composition");
        }
    }
    space.compositions.push_back(Composition{a, b, result});
}

struct ComposeParams {
    int neuron_count = 0;  // N
    int alpha = 0;         // correlate size of a base concept
    int beta = 0;          // correlates inherited from each component
};

inline void validate_params(const ComposeParams& params) {
    if (params.neuron_count <= 0) {
        throw std::invalid_argument("compose params: neuron_count must be positive");
    }
    if (params.beta < 0 || params.beta > params.alpha || params.alpha > params.neuron_count) {
        throw std::invalid_argument("compose params: need 0 <= beta <= alpha <= neuron_count");
    }
}

// Uniform alpha-subset of the neuron pool.
inline std::vector<int> sample_base_concept(const ComposeParams& params, Rng& rng) {
    validate_params(params);
    return sample_index_subset(params.neuron_count, params.alpha, rng);
}

// One draw of the composition model: inherit beta correlates from each
// component independently, then top up to alpha with neurons belonging to
// neither component. The union of inherited sets can exceed alpha; such
// draws are kept and only flagged.
struct CompositionSample {
    std::vector<int> shared_a;  // inherited from A
    std::vector<int> shared_b;  // inherited from B
    std::vector<int> unique;    // drawn from outside A and B
    std::vector<int> result;
    bool oversize = false;      // inherited union already larger than alpha
};

inline CompositionSample sample_composition(const std::vector<int>& a, const std::vector<int>& b,
                                            const ComposeParams& params, Rng& rng) {
    validate_params(params);
    if (static_cast<int>(a.size()) < params.beta || static_cast<int>(b.size()) < params.beta) {
        throw std::invalid_argument("sample_composition: components smaller than beta");
    }
    CompositionSample sample;
    sample.shared_a = sample_subset(a, params.beta, rng);
    sample.shared_b = sample_subset(b, params.beta, rng);
    const std::vector<int> inherited = set_union(sample.shared_a, sample.shared_b);
    sample.oversize = static_cast<int>(inherited.size()) > params.alpha;

    std::vector<int> pool;
    const std::vector<int> either = set_union(a, b);
    for (int i = 0; i < params.neuron_count; ++i) {
        if (!std::binary_search(either.begin(), either.end(), i)) {
            pool.push_back(i);
        }
    }
    const int want = std::max(0, params.alpha - static_cast<int>(inherited.size()));
    const int take = std::min(want, static_cast<int>(pool.size()));
    sample.unique = sample_subset(pool, take, rng);
    sample.result = set_union(inherited, sample.unique);
    return sample;
}

// Structural check of each declared composition: a composed concept should
// share correlates with both of its components.
struct TripleCheck {
    std::string a;
    std::string b;
    std::string result;
    std::vector<int> shared_with_a;
    std::vector<int> shared_with_b;
    std::vector<int> residual;  // correlates belonging to neither component
    bool violation = false;     // one of the shared sets is empty
};

inline std::vector<TripleCheck> functor_check(const ConceptSpace& space) {
    std::vector<TripleCheck> checks;
    checks.reserve(space.compositions.size());
    for (const auto& comp : space.compositions) {
        TripleCheck check;
        check.a = comp.a;
        check.b = comp.b;
        check.result = comp.result;
        const auto& fa = space.correlate(comp.a);
        const auto& fb = space.correlate(comp.b);
        const auto& fr = space.correlate(comp.result);
        check.shared_with_a = set_intersection(fr, fa);
        check.shared_with_b = set_intersection(fr, fb);
        check.residual = set_difference(set_difference(fr, fa), fb);
        check.violation = check.shared_with_a.empty() || check.shared_with_b.empty();
        checks.push_back(std::move(check));
    }
    return checks;
}

} // namespace mmk
