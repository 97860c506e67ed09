// Small helpers for the two set representations used across the library:
// string-id sets kept in declaration order, and sorted int index sets.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace mmk {

// --- sorted int index sets -------------------------------------------------

inline std::vector<int> set_union(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::vector<int> set_intersection(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::vector<int> set_difference(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// --- string-id sets (declaration order, compared as sets) -------------------

inline bool contains(const std::vector<std::string>& ids, const std::string& id) {
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

inline bool same_set(std::vector<std::string> a, std::vector<std::string> b) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return a == b;
}

inline bool is_subset(const std::vector<std::string>& sub, const std::vector<std::string>& super) {
    return std::all_of(sub.begin(), sub.end(),
                       [&](const std::string& id) { return contains(super, id); });
}

inline std::vector<std::string> id_intersection(const std::vector<std::string>& a,
                                                const std::vector<std::string>& b) {
    std::vector<std::string> out;
    for (const auto& id : a) {
        if (contains(b, id) && !contains(out, id)) {
            out.push_back(id);
        }
    }
    return out;
}

} // namespace mmk
