// Statistics for the composition model: closed-form expectations, exact
// hypergeometric overlap tests with a moment-matched gamma aggregate, the
// Monte Carlo estimator, and the activation-table CSV format.
#pragma once

#include <algorithm>
#include <cfloat>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mmk/cogmech.hpp"
#include "mmk/rng.hpp"
#include "mmk/sets.hpp"

namespace mmk::stats {

// Per-neuron probability that both concepts contain a given neuron when
// their overlap count is known.
inline double prob_joint(int overlap, int neuron_count) {
    if (neuron_count <= 0 || overlap < 0 || overlap > neuron_count) {
        throw std::invalid_argument("prob_joint: overlap must lie in [0, neuron_count]");
    }
    return static_cast<double>(overlap) / neuron_count;
}

// The same probability under independence: the product of the two
// per-concept activation rates.
inline double independence_joint(int size_x, int size_y, int neuron_count) {
    if (neuron_count <= 0 || size_x < 0 || size_y < 0 || size_x > neuron_count ||
        size_y > neuron_count) {
        throw std::invalid_argument("independence_joint: sizes must lie in [0, neuron_count]");
    }
    const double n = neuron_count;
    return (size_x / n) * (size_y / n);
}

// Expectations implied by the composition model for pool size N, base size
// alpha, inheritance beta. `s_shared` is the expected size of the inherited
// union, `n_union` the expected size of the union of the two components.
struct AnalyticComposeStats {
    double p_active = 0;    // a given neuron belongs to one base concept
    double p_either = 0;    // a given neuron belongs to at least one of two
    double n_union = 0;     // expected |A or B|
    double s_shared = 0;    // expected inherited count
    double p_in_union = 0;  // activation rate inside the component union
    double p_outside = 0;   // activation rate outside it
};

inline AnalyticComposeStats analytic_compose_stats(int alpha, int beta, int neuron_count) {
    validate_params(ComposeParams{neuron_count, alpha, beta});
    AnalyticComposeStats out;
    if (alpha == 0) {
        return out;
    }
    const double n = neuron_count;
    const double a = alpha;
    const double b = beta;
    out.p_active = a / n;
    out.p_either = 2.0 * a / n - (a * a) / (n * n);
    out.n_union = 2.0 * a - (a * a) / n;
    out.s_shared = 2.0 * b - (b * b) / n;
    out.p_in_union = out.s_shared / out.n_union;
    if (alpha == neuron_count) {
        throw std::domain_error("analytic_compose_stats: alpha equal to the pool size leaves no outside region");
    }
    out.p_outside = (a - out.s_shared) / (n - out.n_union);
    return out;
}

namespace detail {

// ln k!, grown on demand. Long double keeps the tail sums of large
// hypergeometric terms honest.
inline long double log_factorial(int k) {
    if (k < 0) {
        throw std::invalid_argument("log_factorial: negative argument");
    }
    static std::vector<long double> table{0.0L, 0.0L};
    static std::mutex guard;
    std::lock_guard<std::mutex> lock(guard);
    while (static_cast<int>(table.size()) <= k) {
        const long double n = static_cast<long double>(table.size());
        table.push_back(table.back() + std::log(n));
    }
    return table[static_cast<std::size_t>(k)];
}

inline void check_hypergeom_args(int population, int successes, int draws) {
    if (population <= 0 || successes < 0 || successes > population || draws < 0 ||
        draws > population) {
        throw std::invalid_argument("hypergeometric: need 0 <= successes, draws <= population");
    }
}

} // namespace detail

// P(X = k) for X counting successes among `draws` draws without replacement
// from a population with `successes` marked members.
inline long double hypergeom_pmf(int population, int successes, int draws, int k) {
    detail::check_hypergeom_args(population, successes, draws);
    const int lo = std::max(0, draws + successes - population);
    const int hi = std::min(successes, draws);
    if (k < lo || k > hi) {
        return 0.0L;
    }
    const auto log_choose = [](int n, int r) {
        return detail::log_factorial(n) - detail::log_factorial(r) - detail::log_factorial(n - r);
    };
    const long double log_p = log_choose(successes, k) +
                              log_choose(population - successes, draws - k) -
                              log_choose(population, draws);
    return std::exp(log_p);
}

// P(X >= k), summed exactly over the support.
inline double hypergeom_upper_tail(int population, int successes, int draws, int k) {
    detail::check_hypergeom_args(population, successes, draws);
    const int lo = std::max(0, draws + successes - population);
    const int hi = std::min(successes, draws);
    if (k <= lo) {
        return 1.0;
    }
    if (k > hi) {
        return 0.0;
    }
    long double sum = 0.0L;
    for (int j = k; j <= hi; ++j) {
        sum += hypergeom_pmf(population, successes, draws, j);
    }
    return static_cast<double>(std::min(sum, 1.0L));
}

inline double hypergeom_mean(int population, int successes, int draws) {
    detail::check_hypergeom_args(population, successes, draws);
    return static_cast<double>(draws) * successes / population;
}

// Regularized upper incomplete gamma Q(a, x): series for the lower part when
// x is small against a, Lentz's continued fraction otherwise.
inline double gamma_upper_tail(double a, double x) {
    if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(x)) {
        throw std::invalid_argument("gamma_upper_tail: need finite a > 0 and finite x");
    }
    if (x <= 0.0) {
        return 1.0;
    }
    const long double la = a;
    const long double lx = x;
    const long double log_prefix = la * std::log(lx) - lx - std::lgamma(la);
    if (lx < la + 1.0L) {
        long double term = 1.0L / la;
        long double sum = term;
        long double ap = la;
        for (int i = 0; i < 2000; ++i) {
            ap += 1.0L;
            term *= lx / ap;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-18L) {
                break;
            }
        }
        const long double p = std::exp(log_prefix) * sum;
        return static_cast<double>(std::clamp(1.0L - p, 0.0L, 1.0L));
    }
    const long double tiny = 1e-300L;
    long double b = lx + 1.0L - la;
    long double c = 1.0L / tiny;
    long double d = 1.0L / b;
    long double h = d;
    for (int i = 1; i <= 2000; ++i) {
        const long double an = -static_cast<long double>(i) * (static_cast<long double>(i) - la);
        b += 2.0L;
        d = an * d + b;
        if (std::fabs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::fabs(c) < tiny) {
            c = tiny;
        }
        d = 1.0L / d;
        const long double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0L) < 1e-18L) {
            break;
        }
    }
    const long double q = std::exp(log_prefix) * h;
    return static_cast<double>(std::clamp(q, 0.0L, 1.0L));
}

// Chi-square survival function with (possibly fractional) dof.
inline double chi2_sf(double x, double dof) {
    if (!(dof > 0.0)) {
        throw std::invalid_argument("chi2_sf: dof must be positive");
    }
    if (x <= 0.0) {
        return 1.0;
    }
    return gamma_upper_tail(dof / 2.0, x / 2.0);
}

// Null moments of -2 ln P(X >= x) when X is hypergeometric. The discrete
// tail makes these far from the exponential moments behind the classic
// chi-square reference, so the aggregate below matches a gamma to them
// instead.
struct TailMoments {
    double mean = 0;
    double var = 0;
};

inline TailMoments fisher_component_moments(int population, int successes, int draws) {
    detail::check_hypergeom_args(population, successes, draws);
    const int lo = std::max(0, draws + successes - population);
    const int hi = std::min(successes, draws);
    std::vector<long double> pmf(static_cast<std::size_t>(hi - lo + 1));
    for (int k = lo; k <= hi; ++k) {
        pmf[static_cast<std::size_t>(k - lo)] = hypergeom_pmf(population, successes, draws, k);
    }
    long double tail = 0.0L;
    long double m1 = 0.0L;
    long double m2 = 0.0L;
    for (int k = hi; k >= lo; --k) {
        tail = std::min(tail + pmf[static_cast<std::size_t>(k - lo)], 1.0L);
        const long double y = -2.0L * std::log(std::max(tail, static_cast<long double>(DBL_MIN)));
        m1 += pmf[static_cast<std::size_t>(k - lo)] * y;
        m2 += pmf[static_cast<std::size_t>(k - lo)] * y * y;
    }
    TailMoments out;
    out.mean = static_cast<double>(m1);
    out.var = static_cast<double>(std::max(m2 - m1 * m1, 0.0L));
    return out;
}

// Activation tables: per-concept neuron index sets plus declared
// compositions, the input of the detection test.
struct ActivationRow {
    std::string concept_id;
    std::vector<int> neurons;  // sorted, unique
};

struct ActivationDataset {
    int neuron_count = 0;
    std::vector<ActivationRow> rows;
    std::vector<Composition> triples;

    bool has(const std::string& id) const {
        for (const auto& row : rows) {
            if (row.concept_id == id) {
                return true;
            }
        }
        return false;
    }
    const std::vector<int>& neurons_of(const std::string& id) const {
        for (const auto& row : rows) {
            if (row.concept_id == id) {
                return row.neurons;
            }
        }
        throw std::invalid_argument("neurons_of: unknown concept '" + id + "'");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) {
        ++b;
    }
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) {
        --e;
    }
    return s.substr(b, e - b);
}

inline int parse_int(const std::string& text, const std::string& where) {
    int value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw std::runtime_error(where + ": '" + text + "' is not an integer");
    }
    return value;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

} // namespace detail

// CSV with header `concept,neurons`; the neuron field lists indices
// separated by ';'. A zero neuron_count means infer max index + 1.
inline ActivationDataset load_activations_csv(const std::string& path, int neuron_count = 0) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    ActivationDataset data;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    int max_index = -1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = detail::trim(line);
        if (text.empty()) {
            continue;
        }
        const std::string where = path + ":" + std::to_string(line_no);
        if (!saw_header) {
            if (text != "concept,neurons") {
                throw std::runtime_error(where + ": expected header 'concept,neurons'");
            }
            saw_header = true;
            continue;
        }
        const std::size_t comma = text.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error(where + ": expected 'concept,neurons' row");
        }
        ActivationRow row;
        row.concept_id = detail::trim(text.substr(0, comma));
        if (row.concept_id.empty()) {
            throw std::runtime_error(where + ": empty concept id");
        }
        if (data.has(row.concept_id)) {
            throw std::runtime_error(where + ": duplicate concept '" + row.concept_id + "'");
        }
        const std::string rest = detail::trim(text.substr(comma + 1));
        if (!rest.empty()) {
            for (const auto& piece : detail::split(rest, ';')) {
                const std::string item = detail::trim(piece);
                if (item.empty()) {
                    throw std::runtime_error(where + ": empty neuron index");
                }
                row.neurons.push_back(detail::parse_int(item, where));
            }
        }
        std::sort(row.neurons.begin(), row.neurons.end());
        if (std::adjacent_find(row.neurons.begin(), row.neurons.end()) != row.neurons.end()) {
            throw std::runtime_error(where + ": duplicate neuron index in '" + row.concept_id + "'");
        }
        for (const int idx : row.neurons) {
            if (idx < 0) {
                throw std::runtime_error(where + ": negative neuron index");
            }
            if (neuron_count > 0 && idx >= neuron_count) {
                throw std::runtime_error(where + ": index " + std::to_string(idx) +
                                         " outside pool of size " + std::to_string(neuron_count));
            }
            max_index = std::max(max_index, idx);
        }
        data.rows.push_back(std::move(row));
    }
    if (!saw_header) {
        throw std::runtime_error(path + ": empty file");
    }
    if (neuron_count > 0) {
        data.neuron_count = neuron_count;
    } else {
        if (max_index < 0) {
            throw std::runtime_error(path + ": cannot infer the pool size from concepts with no neurons");
        }
        data.neuron_count = max_index + 1;
    }
    return data;
}

// CSV with header `component_a,component_b,composed`; every id must appear
// in the activation table, and each composed concept at most once.
inline void load_triples_csv(ActivationDataset& data, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = detail::trim(line);
        if (text.empty()) {
            continue;
        }
        const std::string where = path + ":" + std::to_string(line_no);
        if (!saw_header) {
            if (text != "component_a,component_b,composed") {
                throw std::runtime_error(where + ": expected header 'component_a,component_b,composed'");
            }
            saw_header = true;
            continue;
        }
        const auto fields = detail::split(text, ',');
        if (fields.size() != 3) {
            throw std::runtime_error(where + ": expected three fields");
        }
        Composition triple;
        triple.a = detail::trim(fields[0]);
        triple.b = detail::trim(fields[1]);
        triple.result = detail::trim(fields[2]);
        for (const auto* id : {&triple.a, &triple.b, &triple.result}) {
            if (!data.has(*id)) {
                throw std::runtime_error(where + ": unknown concept '" + *id + "'");
            }
        }
        if (triple.result == triple.a || triple.result == triple.b) {
            throw std::runtime_error(where + ": '" + triple.result + "' cannot compose itself");
        }
        for (const auto& existing : data.triples) {
            if (existing.result == triple.result) {
                throw std::runtime_error(where + ": '" + triple.result + "' already has a composition");
            }
        }
        data.triples.push_back(std::move(triple));
    }
    if (!saw_header) {
        throw std::runtime_error(path + ": empty file");
    }
}

inline ActivationDataset dataset_from_space(const ConceptSpace& space) {
    ActivationDataset data;
    data.neuron_count = space.neuron_count;
    for (const auto& id : space.concepts) {
        data.rows.push_back(ActivationRow{id, space.correlate(id)});
    }
    data.triples = space.compositions;
    return data;
}

// One overlap test: observed shared count against the independence null.
struct ComponentTest {
    int observed = 0;
    double null_mean = 0;
    double p_value = 1;
};

struct TripleTest {
    std::string a;
    std::string b;
    std::string result;
    ComponentTest with_a;
    ComponentTest with_b;
    double p_value = 1;  // the two component tests combined
    bool reject = false;
};

struct CompositionTest {
    std::vector<TripleTest> triples;
    double statistic = 0;       // sum of -2 ln p over every component test
    double statistic_mean = 0;  // its null mean
    double statistic_var = 0;   // its null variance
    double aggregate_p = 1;
    bool reject = false;
    double significance = 0.05;
    std::string method;
};

// Tests every declared composition for excess overlap with its components.
// Component p-values are exact hypergeometric upper tails; the combined
// statistic follows Fisher's recipe but, because the discrete tails keep
// -2 ln p well below its continuous distribution, is referred to a gamma
// with the exact null mean and variance rather than to chi-square.
inline CompositionTest test_composition(const ActivationDataset& data, double significance = 0.05) {
    if (!(significance > 0.0 && significance < 1.0)) {
        throw std::invalid_argument("test_composition: significance must lie in (0, 1)");
    }
    if (data.triples.empty()) {
        throw std::invalid_argument("test_composition: dataset declares no compositions");
    }
    const int n = data.neuron_count;
    CompositionTest out;
    out.significance = significance;
    out.method = "fisher_gamma";

    std::map<std::pair<int, int>, TailMoments> cache;
    const auto moments = [&](int successes, int draws) {
        const auto key = std::make_pair(successes, draws);
        auto it = cache.find(key);
        if (it == cache.end()) {
            it = cache.emplace(key, fisher_component_moments(n, successes, draws)).first;
        }
        return it->second;
    };

    long double stat = 0.0L;
    long double mean_sum = 0.0L;
    long double var_sum = 0.0L;
    for (const auto& triple : data.triples) {
        const auto& fa = data.neurons_of(triple.a);
        const auto& fb = data.neurons_of(triple.b);
        const auto& fd = data.neurons_of(triple.result);
        TripleTest tt;
        tt.a = triple.a;
        tt.b = triple.b;
        tt.result = triple.result;
        const auto run_component = [&](const std::vector<int>& component) {
            ComponentTest ct;
            ct.observed = static_cast<int>(set_intersection(fd, component).size());
            ct.null_mean = independence_joint(static_cast<int>(component.size()),
                                              static_cast<int>(fd.size()), n) * n;
            ct.p_value = hypergeom_upper_tail(n, static_cast<int>(component.size()),
                                              static_cast<int>(fd.size()), ct.observed);
            return ct;
        };
        tt.with_a = run_component(fa);
        tt.with_b = run_component(fb);
        const TailMoments ma = moments(static_cast<int>(fa.size()), static_cast<int>(fd.size()));
        const TailMoments mb = moments(static_cast<int>(fb.size()), static_cast<int>(fd.size()));
        const double ya = -2.0 * std::log(std::max(tt.with_a.p_value, DBL_MIN));
        const double yb = -2.0 * std::log(std::max(tt.with_b.p_value, DBL_MIN));
        const double pair_mean = ma.mean + mb.mean;
        const double pair_var = ma.var + mb.var;
        if (pair_var <= 0.0) {
            tt.p_value = 1.0;
        } else {
            tt.p_value = gamma_upper_tail(pair_mean * pair_mean / pair_var,
                                          (ya + yb) * pair_mean / pair_var);
        }
        tt.reject = tt.p_value < significance;
        stat += ya + yb;
        mean_sum += pair_mean;
        var_sum += pair_var;
        out.triples.push_back(std::move(tt));
    }
    out.statistic = static_cast<double>(stat);
    out.statistic_mean = static_cast<double>(mean_sum);
    out.statistic_var = static_cast<double>(var_sum);
    if (var_sum <= 0.0L) {
        out.aggregate_p = 1.0;
    } else {
        const double shape = static_cast<double>(mean_sum * mean_sum / var_sum);
        const double scale = static_cast<double>(var_sum / mean_sum);
        out.aggregate_p = gamma_upper_tail(shape, out.statistic / scale);
    }
    out.reject = out.aggregate_p < significance;
    return out;
}

// Method-of-moments fit: alpha from the mean correlate size, beta from the
// mean overlap between composed concepts and their components. The overlap
// includes the by-chance share of the top-up draw, so beta_hat runs high by
// about beta (alpha - beta) / N.
struct ParamEstimate {
    double alpha_hat = 0;
    double beta_hat = 0;
};

inline ParamEstimate estimate_params(const ActivationDataset& data) {
    if (data.rows.empty()) {
        throw std::invalid_argument("estimate_params: empty dataset");
    }
    if (data.triples.empty()) {
        throw std::invalid_argument("estimate_params: no compositions to estimate beta from");
    }
    double size_sum = 0;
    for (const auto& row : data.rows) {
        size_sum += static_cast<double>(row.neurons.size());
    }
    double overlap_sum = 0;
    int components = 0;
    for (const auto& triple : data.triples) {
        const auto& fd = data.neurons_of(triple.result);
        overlap_sum += static_cast<double>(set_intersection(fd, data.neurons_of(triple.a)).size());
        overlap_sum += static_cast<double>(set_intersection(fd, data.neurons_of(triple.b)).size());
        components += 2;
    }
    ParamEstimate est;
    est.alpha_hat = size_sum / static_cast<double>(data.rows.size());
    est.beta_hat = overlap_sum / static_cast<double>(components);
    return est;
}

// Monte Carlo summary of the composition model. Frequencies are ratios of
// integer sums, so results are exact functions of (seed, trials) and do not
// depend on the worker count: every trial draws from its own stream.
struct MonteCarloSummary {
    long long trials = 0;
    int workers = 1;
    double mean_union = 0;        // |A or B|
    double mean_shared = 0;       // inherited union size
    double mean_result_size = 0;  // |composed|
    double freq_in_union = 0;     // activation rate inside A or B
    double freq_outside = 0;      // activation rate outside both
    std::vector<double> neuron_freq;
    long long oversize_trials = 0;
};

inline MonteCarloSummary monte_carlo_compose(const ComposeParams& params, long long trials,
                                             std::uint64_t seed, int workers = 1) {
    validate_params(params);
    if (trials <= 0) {
        throw std::invalid_argument("monte_carlo_compose: trials must be positive");
    }
    if (workers <= 0) {
        throw std::invalid_argument("monte_carlo_compose: workers must be positive");
    }
    const int n = params.neuron_count;
    const int used = static_cast<int>(std::min<long long>(workers, trials));

    struct Acc {
        long long union_sum = 0;
        long long shared_sum = 0;
        long long result_sum = 0;
        long long unique_sum = 0;
        long long outside_pool_sum = 0;
        long long oversize = 0;
        std::vector<long long> neuron_hits;
    };
    std::vector<Acc> accs(static_cast<std::size_t>(used));

    const auto run_range = [&params, n](long long lo, long long hi, std::uint64_t base_seed,
                                        Acc* acc) {
        acc->neuron_hits.assign(static_cast<std::size_t>(n), 0);
        for (long long t = lo; t < hi; ++t) {
            Rng rng = Rng::stream(base_seed, static_cast<std::uint64_t>(t));
            const std::vector<int> a = sample_base_concept(params, rng);
            const std::vector<int> b = sample_base_concept(params, rng);
            const CompositionSample s = sample_composition(a, b, params, rng);
            const std::vector<int> either = set_union(a, b);
            acc->union_sum += static_cast<long long>(either.size());
            acc->shared_sum += static_cast<long long>(set_union(s.shared_a, s.shared_b).size());
            acc->result_sum += static_cast<long long>(s.result.size());
            acc->unique_sum += static_cast<long long>(s.unique.size());
            acc->outside_pool_sum += n - static_cast<long long>(either.size());
            if (s.oversize) {
                ++acc->oversize;
            }
            for (const int idx : s.result) {
                ++acc->neuron_hits[static_cast<std::size_t>(idx)];
            }
        }
    };

    if (used == 1) {
        run_range(0, trials, seed, &accs[0]);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(used));
        const long long chunk = (trials + used - 1) / used;
        for (int w = 0; w < used; ++w) {
            const long long lo = static_cast<long long>(w) * chunk;
            const long long hi = std::min(trials, lo + chunk);
            threads.emplace_back(run_range, lo, hi, seed, &accs[static_cast<std::size_t>(w)]);
        }
        for (auto& thread : threads) {
            thread.join();
        }
    }

    Acc total;
    total.neuron_hits.assign(static_cast<std::size_t>(n), 0);
    for (const auto& acc : accs) {
        total.union_sum += acc.union_sum;
        total.shared_sum += acc.shared_sum;
        total.result_sum += acc.result_sum;
        total.unique_sum += acc.unique_sum;
        total.outside_pool_sum += acc.outside_pool_sum;
        total.oversize += acc.oversize;
        for (std::size_t i = 0; i < acc.neuron_hits.size(); ++i) {
            total.neuron_hits[i] += acc.neuron_hits[i];
        }
    }

    MonteCarloSummary summary;
    summary.trials = trials;
    summary.workers = used;
    const double t = static_cast<double>(trials);
    summary.mean_union = static_cast<double>(total.union_sum) / t;
    summary.mean_shared = static_cast<double>(total.shared_sum) / t;
    summary.mean_result_size = static_cast<double>(total.result_sum) / t;
    summary.freq_in_union = total.union_sum == 0
                                ? 0.0
                                : static_cast<double>(total.shared_sum) /
                                      static_cast<double>(total.union_sum);
    summary.freq_outside = total.outside_pool_sum == 0
                               ? 0.0
                               : static_cast<double>(total.unique_sum) /
                                     static_cast<double>(total.outside_pool_sum);
    summary.neuron_freq.resize(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < summary.neuron_freq.size(); ++i) {
        summary.neuron_freq[i] = static_cast<double>(total.neuron_hits[i]) / t;
    }
    summary.oversize_trials = total.oversize;
    return summary;
}

} // namespace mmk::stats
