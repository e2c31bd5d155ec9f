#include "nlocal/lhv.hpp"

#include <cmath>
#include <random>
#include <string>

#include "nlocal/error.hpp"
#include "nlocal/inequalities.hpp"

namespace nlocal {

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

std::vector<double> simplex_point(std::mt19937_64& rng, int size) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> p(size);
    double total = 0.0;
    for (auto& v : p) total += (v = e(rng));
    for (auto& v : p) v /= total;
    return p;
}

std::size_t table_size(const ClassicalModel& m, const std::vector<int>& sources) {
    std::size_t size = 1;
    for (int s : sources) size *= static_cast<std::size_t>(m.alphabet(s));
    return size;
}

void check_supported(Topology topology, int n) {
    if (topology == Topology::Linear && (n < 2 || n > 4))
        throw InvalidArgument("linear classical models support 2..4 sources");
    if (topology == Topology::Nonlinear && n != 3 && n != 4)
        throw InvalidArgument("non-linear classical models support 3 or 4 sources");
}

// Empty tables sized for the given alphabets.
ClassicalModel skeleton(Topology topology, int n, const std::vector<int>& alphabets) {
    ClassicalModel m;
    m.topology = topology;
    m.n = n;
    for (int a : alphabets) m.lambdas.emplace_back(a, 1.0 / a);
    const auto shape = m.shape();
    m.extreme.resize(shape.extremes);
    for (int e = 0; e < shape.extremes; ++e) m.extreme[e].resize(m.alphabet(m.extreme_source(e)), {0, 0});
    m.intermediate.resize(shape.intermediates);
    for (int j = 0; j < shape.intermediates; ++j) m.intermediate[j].resize(table_size(m, m.intermediate_sources(j)), 0u);
    return m;
}

void randomize_extreme(ClassicalModel& m, int e, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> bit(0, 1);
    for (auto& row : m.extreme[e]) row = {bit(rng), bit(rng)};
}

void randomize_intermediate(ClassicalModel& m, int j, std::mt19937_64& rng) {
    std::uniform_int_distribution<unsigned> label(0, static_cast<unsigned>(m.shape().label_count() - 1));
    for (auto& v : m.intermediate[j]) v = label(rng);
}

bool attached(const std::vector<int>& sources, int s) {
    for (int t : sources)
        if (t == s) return true;
    return false;
}

Family family_of(Topology topology, int n) {
    if (topology == Topology::Linear) return Family::Linear;
    return n == 3 ? Family::Trilocal : Family::Nlocal;
}

}  // namespace

DistributionShape ClassicalModel::shape() const {
    return topology == Topology::Linear ? DistributionShape::linear(n) : DistributionShape::nonlinear(n);
}

int ClassicalModel::extreme_source(int e) const {
    if (topology == Topology::Nonlinear) return e;
    return e == 0 ? 0 : n - 1;
}

std::vector<int> ClassicalModel::intermediate_sources(int j) const {
    if (topology == Topology::Linear) return {j, j + 1};
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    return all;
}

void ClassicalModel::validate() const {
    check_supported(topology, n);
    if (static_cast<int>(lambdas.size()) != n) throw InvalidArgument("one hidden-variable distribution per source");
    for (const auto& l : lambdas) {
        if (l.empty()) throw InvalidArgument("empty hidden alphabet");
        double total = 0.0;
        for (double p : l) {
            if (!(p >= 0.0)) throw InvalidArgument("negative hidden-variable probability");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("hidden-variable distribution does not sum to 1");
    }
    const auto s = shape();
    if (static_cast<int>(extreme.size()) != s.extremes) throw InvalidArgument("wrong number of extreme tables");
    for (int e = 0; e < s.extremes; ++e) {
        if (static_cast<int>(extreme[e].size()) != alphabet(extreme_source(e)))
            throw InvalidArgument("extreme table size does not match its source alphabet");
        for (const auto& row : extreme[e])
            for (int bit : row)
                if (bit != 0 && bit != 1) throw InvalidArgument("extreme outputs must be bits");
    }
    if (static_cast<int>(intermediate.size()) != s.intermediates)
        throw InvalidArgument("wrong number of intermediate tables");
    for (int j = 0; j < s.intermediates; ++j) {
        if (intermediate[j].size() != table_size(*this, intermediate_sources(j)))
            throw InvalidArgument("intermediate table size does not match its source alphabets");
        for (unsigned v : intermediate[j])
            if (v >= s.label_count()) throw InvalidArgument("intermediate label out of range");
    }
}

ClassicalModel sample_model(Topology topology, int n, int alphabet, std::uint64_t seed) {
    check_supported(topology, n);
    if (alphabet < 1 || alphabet > 8) throw InvalidArgument("hidden alphabet must be in 1..8");
    auto m = skeleton(topology, n, std::vector<int>(n, alphabet));
    auto rng = stream(seed, 0);
    for (auto& l : m.lambdas) l = simplex_point(rng, alphabet);
    for (int e = 0; e < static_cast<int>(m.extreme.size()); ++e) randomize_extreme(m, e, rng);
    for (int j = 0; j < static_cast<int>(m.intermediate.size()); ++j) randomize_intermediate(m, j, rng);
    return m;
}

ClassicalModel constant_model(Topology topology, int n) {
    check_supported(topology, n);
    return skeleton(topology, n, std::vector<int>(n, 1));
}

OutcomeDistribution model_distribution(const ClassicalModel& m) {
    m.validate();
    const auto shape = m.shape();
    std::vector<double> p(shape.size(), 0.0);

    std::vector<int> eta(m.n, 0);
    std::vector<std::vector<int>> int_sources(shape.intermediates);
    for (int j = 0; j < shape.intermediates; ++j) int_sources[j] = m.intermediate_sources(j);

    while (true) {
        double weight = 1.0;
        for (int i = 0; i < m.n; ++i) weight *= m.lambdas[i][eta[i]];

        if (weight > 0.0) {
            std::size_t b = 0;
            for (int j = 0; j < shape.intermediates; ++j) {
                std::size_t k = 0;
                for (int s : int_sources[j]) k = k * m.alphabet(s) + eta[s];
                b = (b << shape.label_bits) | m.intermediate[j][k];
            }
            for (std::size_t x = 0; x < shape.input_count(); ++x) {
                std::size_t a = 0;
                for (int e = 0; e < shape.extremes; ++e) {
                    const int xe = static_cast<int>((x >> (shape.extremes - 1 - e)) & 1u);
                    a = (a << 1) | static_cast<std::size_t>(m.extreme[e][eta[m.extreme_source(e)]][xe]);
                }
                p[(x * shape.output_count() + a) * shape.label_combo_count() + b] += weight;
            }
        }

        int i = m.n - 1;
        while (i >= 0 && ++eta[i] == m.alphabet(i)) eta[i--] = 0;
        if (i < 0) break;
    }
    return OutcomeDistribution(shape, std::move(p));
}

ClassicalModel mix_on_source(const ClassicalModel& a, const ClassicalModel& b, double w, int source) {
    a.validate();
    b.validate();
    if (a.topology != b.topology || a.n != b.n) throw InvalidArgument("mixed models must share the network");
    if (source < 0 || source >= a.n) throw InvalidArgument("source index out of range");
    if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument("mixing weight outside [0, 1]");
    if (a.lambdas != b.lambdas) throw InvalidArgument("mixed models must share every source distribution");
    const auto shape = a.shape();
    for (int e = 0; e < shape.extremes; ++e)
        if (a.extreme_source(e) != source && a.extreme[e] != b.extreme[e])
            throw InvalidArgument("models differ at an extreme party not attached to the mixing source");
    for (int j = 0; j < shape.intermediates; ++j)
        if (!attached(a.intermediate_sources(j), source) && a.intermediate[j] != b.intermediate[j])
            throw InvalidArgument("models differ at an intermediate party not attached to the mixing source");

    // The mixing source's new variable is (flag, eta) with flag most
    // significant; flag 0 selects a's responses.
    const int old = a.alphabet(source);
    std::vector<int> alphabets(a.n);
    for (int i = 0; i < a.n; ++i) alphabets[i] = a.alphabet(i);
    alphabets[source] = 2 * old;
    auto m = skeleton(a.topology, a.n, alphabets);
    m.lambdas = a.lambdas;
    m.lambdas[source].clear();
    for (double p : a.lambdas[source]) m.lambdas[source].push_back(w * p);
    for (double p : a.lambdas[source]) m.lambdas[source].push_back((1.0 - w) * p);
    double total = 0.0;
    for (double p : m.lambdas[source]) total += p;
    for (double& p : m.lambdas[source]) p /= total;

    for (int e = 0; e < shape.extremes; ++e) {
        if (a.extreme_source(e) != source) {
            m.extreme[e] = a.extreme[e];
            continue;
        }
        for (int k = 0; k < old; ++k) {
            m.extreme[e][k] = a.extreme[e][k];
            m.extreme[e][old + k] = b.extreme[e][k];
        }
    }
    for (int j = 0; j < shape.intermediates; ++j) {
        const auto sources = a.intermediate_sources(j);
        if (!attached(sources, source)) {
            m.intermediate[j] = a.intermediate[j];
            continue;
        }
        // Walk the enlarged index space and map back to the original one.
        std::vector<int> eta(sources.size(), 0);
        for (std::size_t k = 0; k < m.intermediate[j].size(); ++k) {
            std::size_t rest = k;
            for (std::size_t t = sources.size(); t-- > 0;) {
                eta[t] = static_cast<int>(rest % alphabets[sources[t]]);
                rest /= alphabets[sources[t]];
            }
            bool use_b = false;
            std::size_t original = 0;
            for (std::size_t t = 0; t < sources.size(); ++t) {
                int v = eta[t];
                if (sources[t] == source) {
                    use_b = v >= old;
                    v %= old;
                }
                original = original * a.alphabet(sources[t]) + v;
            }
            m.intermediate[j][k] = use_b ? b.intermediate[j][original] : a.intermediate[j][original];
        }
    }
    return m;
}

ClassicalModel resample_attached(const ClassicalModel& m, int source, std::uint64_t seed) {
    m.validate();
    if (source < 0 || source >= m.n) throw InvalidArgument("source index out of range");
    auto out = m;
    auto rng = stream(seed, 1);
    const auto shape = m.shape();
    for (int e = 0; e < shape.extremes; ++e)
        if (m.extreme_source(e) == source) randomize_extreme(out, e, rng);
    for (int j = 0; j < shape.intermediates; ++j)
        if (attached(m.intermediate_sources(j), source)) randomize_intermediate(out, j, rng);
    return out;
}

CertifyReport certify(Topology topology, int n, int trials, std::uint64_t seed, int alphabet) {
    if (trials < 1) throw InvalidArgument("certify needs at least one trial");
    check_supported(topology, n);
    const Family family = family_of(topology, n);

    CertifyReport report;
    report.topology = topology;
    report.n = n;
    report.alphabet = alphabet;
    report.trials = trials;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(t);
        auto model = sample_model(topology, n, alphabet, trial_seed);
        if (t % 2 == 1) {
            auto rng = stream(trial_seed, 2);
            const int source = std::uniform_int_distribution<int>(0, n - 1)(rng);
            const double w = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            model = mix_on_source(model, resample_attached(model, source, trial_seed), w, source);
            ++report.mixtures;
        }
        const auto d = model_distribution(model);
        const auto r = evaluate(d, family);
        report.max_lhs = std::max(report.max_lhs, r.max_lhs);
        report.max_normalization_defect = std::max(report.max_normalization_defect, d.normalization_defect());
        report.max_no_signaling_deviation =
            std::max(report.max_no_signaling_deviation, check_no_signaling(d).max_deviation);
        if (r.max_lhs > kViolationThreshold) report.failures.push_back(model);
    }
    return report;
}

nlohmann::json to_json(const ClassicalModel& m) {
    nlohmann::json j;
    j["topology"] = to_string(m.topology);
    j["n"] = m.n;
    j["lambdas"] = m.lambdas;
    j["extreme"] = nlohmann::json::array();
    for (const auto& table : m.extreme) {
        auto rows = nlohmann::json::array();
        for (const auto& row : table) rows.push_back({row[0], row[1]});
        j["extreme"].push_back(rows);
    }
    j["intermediate"] = m.intermediate;
    return j;
}

nlohmann::json to_json(const CertifyReport& r) {
    nlohmann::json j;
    j["topology"] = to_string(r.topology);
    j["n"] = r.n;
    j["alphabet"] = r.alphabet;
    j["trials"] = r.trials;
    j["mixtures"] = r.mixtures;
    j["max_lhs"] = r.max_lhs;
    j["max_no_signaling_deviation"] = r.max_no_signaling_deviation;
    j["max_normalization_defect"] = r.max_normalization_defect;
    j["failure_count"] = r.failures.size();
    j["failures"] = nlohmann::json::array();
    for (const auto& m : r.failures) j["failures"].push_back(to_json(m));
    return j;
}

}  // namespace nlocal
