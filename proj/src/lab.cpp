#include "treeca/lab.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "treeca/compact.hpp"
#include "treeca/errors.hpp"
#include "treeca/random.hpp"

namespace treeca {

std::optional<double> ClassificationRecord::mortal_fraction() const {
    if (!mortal_samples) return std::nullopt;
    if (sample_count == 0) return 1.0;
    return static_cast<double>(*mortal_samples) / static_cast<double>(sample_count);
}

std::optional<std::string> ClassificationRecord::consistency_violation() const {
    if (!quiescent) {
        if (tree_nilpotent_horizon) return "non-quiescent rule has a tree nilpotency horizon";
        if (quotient_nilpotent_horizon) return "non-quiescent rule has a quotient nilpotency horizon";
        if (mortal_samples) return "non-quiescent rule was sampled";
        return std::nullopt;
    }
    if (tree_nilpotent_horizon) {
        const int n = *tree_nilpotent_horizon;
        if (!quotient_nilpotent_horizon) {
            return "tree-nilpotent at " + std::to_string(n) + " but the quotient rule is not nilpotent";
        }
        if (*quotient_nilpotent_horizon > n) {
            return "quotient horizon " + std::to_string(*quotient_nilpotent_horizon) + " exceeds tree horizon " +
                   std::to_string(n);
        }
        if (mortal_samples && *mortal_samples != sample_count) {
            return "a sampled configuration survived a rule nilpotent at " + std::to_string(n);
        }
        if (max_first_death && *max_first_death > n) {
            return "a sampled configuration died at " + std::to_string(*max_first_death) + " > horizon " +
                   std::to_string(n);
        }
    }
    return std::nullopt;
}

std::mt19937_64 rule_rng(std::uint64_t seed, const Rule& rule) {
    std::vector<std::uint32_t> material{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                        static_cast<std::uint32_t>(rule.params().k),
                                        static_cast<std::uint32_t>(rule.alphabet().size),
                                        static_cast<std::uint32_t>(rule.radius())};
    for (char c : rule.index_string()) material.push_back(static_cast<std::uint32_t>(c));
    std::seed_seq seq(material.begin(), material.end());
    return std::mt19937_64(seq);
}

std::vector<FiniteConfig> sample_configs(const TreeParams& params, const Alphabet& alphabet, int count,
                                         std::mt19937_64& rng) {
    const VertexSet region_set = ball(params, Vertex{}, 3);
    std::vector<Vertex> region(region_set.begin(), region_set.end());
    std::vector<FiniteConfig> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) {
        FiniteConfig x(params, alphabet);
        if (alphabet.size > 1) {
            const std::uint64_t max_size = std::min<std::uint64_t>(5, region.size());
            const std::uint64_t size = 1 + uniform_below(rng, max_size);
            // partial Fisher-Yates: the first `size` slots become the support
            for (std::uint64_t j = 0; j < size; ++j) {
                const auto pick = j + uniform_below(rng, region.size() - j);
                std::swap(region[j], region[pick]);
                const auto symbol = static_cast<Symbol>(1 + uniform_below(rng, static_cast<std::uint64_t>(alphabet.size - 1)));
                x.set(region[j], symbol);
            }
        }
        out.push_back(std::move(x));
    }
    return out;
}

ClassificationRecord classify(const Rule& rule, const Horizons& horizons, const Limits& limits) {
    ClassificationRecord rec;
    rec.k = rule.params().k;
    rec.alphabet = rule.alphabet().size;
    rec.radius = rule.radius();
    rec.rule_index = rule.index_string();
    rec.quiescent = rule.quiescent();
    if (!rec.quiescent) return rec;

    rec.tree_nilpotent_horizon = tree_nilpotency_horizon(rule, horizons.n_max, limits);
    rec.quotient_nilpotent_horizon = oned_nilpotency_horizon(quotient_rule(rule), horizons.n_max, limits);

    auto rng = rule_rng(horizons.seed, rule);
    const auto samples = sample_configs(rule.params(), rule.alphabet(), horizons.samples, rng);
    rec.sample_count = static_cast<int>(samples.size());
    int mortal = 0;
    for (const auto& x : samples) {
        CompactConfig state(x);
        for (int n = 0; n <= horizons.t_max; ++n) {
            if (state.empty()) {
                ++mortal;
                rec.max_first_death = std::max(rec.max_first_death.value_or(0), n);
                break;
            }
            if (const auto excess = state.support_excess()) {
                rec.max_support_excess = std::max(rec.max_support_excess.value_or(0), *excess);
            }
            if (n < horizons.t_max) state.step(rule);
        }
    }
    rec.mortal_samples = mortal;
    return rec;
}

nlohmann::json CensusSummary::to_json() const {
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [n, count] : tree_horizon_histogram) hist[std::to_string(n)] = count;
    return {{"total", total},
            {"quiescent", quiescent},
            {"tree_nilpotent", tree_nilpotent},
            {"quotient_nilpotent", quotient_nilpotent},
            {"tree_horizon_histogram", std::move(hist)},
            {"sampled_mortal_not_nilpotent", sampled_mortal_not_nilpotent},
            {"consistency_violations", consistency_violations}};
}

CensusSummary summarize(const std::vector<ClassificationRecord>& records) {
    CensusSummary s;
    for (const auto& rec : records) {
        ++s.total;
        if (rec.quiescent) ++s.quiescent;
        if (rec.tree_nilpotent_horizon) {
            ++s.tree_nilpotent;
            ++s.tree_horizon_histogram[*rec.tree_nilpotent_horizon];
        }
        if (rec.quotient_nilpotent_horizon) ++s.quotient_nilpotent;
        if (rec.quiescent && !rec.tree_nilpotent_horizon && rec.mortal_samples &&
            *rec.mortal_samples == rec.sample_count) {
            ++s.sampled_mortal_not_nilpotent;
        }
        if (rec.consistency_violation()) ++s.consistency_violations;
    }
    return s;
}

CensusResult census(const TreeParams& params, const Alphabet& alphabet, int radius, const Horizons& horizons,
                    std::optional<std::pair<std::uint64_t, std::uint64_t>> shard, const Limits& limits,
                    unsigned threads) {
    const RuleEnumeration rules(params, alphabet, radius, limits, shard);
    const std::uint64_t total = rules.size();
    CensusResult result;
    result.records.resize(static_cast<std::size_t>(total));

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= total) return;
            try {
                result.records[static_cast<std::size_t>(i)] = classify(rules.at(rules.begin_index() + i), horizons, limits);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(total);
                return;
            }
        }
    };
    threads = std::max(1u, threads);
    if (threads == 1 || total < 2) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    result.summary = summarize(result.records);
    return result;
}

namespace {

std::string opt_cell(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

std::string fraction_text(double f) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << f;
    return os.str();
}

nlohmann::json opt_json(const std::optional<int>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace

std::string census_csv_header() {
    return "k,alphabet,radius,rule_index,quiescent,tree_nilp_horizon,quot_nilp_horizon,mortal_fraction,"
           "max_first_death,max_support_excess";
}

std::string census_csv_row(const ClassificationRecord& rec) {
    const auto fraction = rec.mortal_fraction();
    return std::to_string(rec.k) + "," + std::to_string(rec.alphabet) + "," + std::to_string(rec.radius) + "," +
           rec.rule_index + "," + (rec.quiescent ? "1" : "0") + "," + opt_cell(rec.tree_nilpotent_horizon) + "," +
           opt_cell(rec.quotient_nilpotent_horizon) + "," + (fraction ? fraction_text(*fraction) : "") + "," +
           opt_cell(rec.max_first_death) + "," + opt_cell(rec.max_support_excess);
}

nlohmann::json record_to_json(const ClassificationRecord& rec) {
    const auto fraction = rec.mortal_fraction();
    return {{"k", rec.k},
            {"alphabet", rec.alphabet},
            {"radius", rec.radius},
            {"rule_index", rec.rule_index},
            {"quiescent", rec.quiescent},
            {"tree_nilp_horizon", opt_json(rec.tree_nilpotent_horizon)},
            {"quot_nilp_horizon", opt_json(rec.quotient_nilpotent_horizon)},
            {"mortal_fraction", fraction ? nlohmann::json(*fraction) : nlohmann::json()},
            {"max_first_death", opt_json(rec.max_first_death)},
            {"max_support_excess", opt_json(rec.max_support_excess)}};
}

std::string census_csv(const CensusResult& result, const TreeParams& params, const Alphabet& alphabet, int radius,
                       const Horizons& horizons) {
    std::string out = "# treeca census k=" + std::to_string(params.k) + " alphabet=" + std::to_string(alphabet.size) +
                      " radius=" + std::to_string(radius) + " nmax=" + std::to_string(horizons.n_max) +
                      " tmax=" + std::to_string(horizons.t_max) + " samples=" + std::to_string(horizons.samples) +
                      " seed=" + std::to_string(horizons.seed) + "\n";
    out += census_csv_header() + "\n";
    for (const auto& rec : result.records) out += census_csv_row(rec) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Z-configurations

namespace {

void check_symbol(const Alphabet& alphabet, Symbol s) {
    if (!alphabet.contains(s)) throw PreconditionError("symbol " + std::to_string(s) + " outside the alphabet");
}

}  // namespace

ZuResult verify_zu_invariance(const Rule& rule, const VertexSet& points, const ZConfiguration& z, int truncation) {
    if (!rule.quiescent()) throw NonQuiescentError("Z-invariance is only checked for quiescent rules");
    const auto& params = rule.params();
    for (const auto& p : points) check_address(params, p);
    const HullDecomposition hd = hull_decomposition(params, points);

    int deepest = 0;
    for (const auto& h : hd.hull()) deepest = std::max(deepest, static_cast<int>(h.depth()));
    if (truncation < deepest + rule.radius()) {
        throw PreconditionError("truncation " + std::to_string(truncation) + " too small; need at least " +
                                std::to_string(deepest + rule.radius()));
    }

    for (const auto& [v, s] : z.hull_labels) {
        if (!hd.in_hull(v) || hd.leaves().contains(v)) {
            throw PreconditionError("hull label on " + v.text() + ", which is not an inner hull vertex");
        }
        check_symbol(rule.alphabet(), s);
    }
    for (const auto& [u, data] : z.level_data) {
        if (!hd.leaves().contains(u)) throw PreconditionError("level data for " + u.text() + ", which is not a leaf");
        for (Symbol s : data) check_symbol(rule.alphabet(), s);
    }
    for (const auto& [v, s] : z.free_labels) {
        check_address(params, v);
        if (hd.in_hull(v) || hd.component_of(v)) {
            throw PreconditionError("free label on " + v.text() + ", which lies in the hull or a leaf branch");
        }
        check_symbol(rule.alphabet(), s);
    }

    const TruncatedBall tb(params, truncation);
    std::vector<Symbol> labels(tb.size(), 0);
    // leaf index and coordinate per vertex; -1 when outside every branch
    std::vector<std::pair<int, int>> branch(tb.size(), {-1, 0});
    const std::vector<Vertex> leaves(hd.leaves().begin(), hd.leaves().end());
    for (std::size_t i = 0; i < tb.size(); ++i) {
        const Vertex& t = tb.vertices[i];
        if (const auto u = hd.component_of(t)) {
            const int c = hd.coordinate(*u, t);
            const auto leaf = std::lower_bound(leaves.begin(), leaves.end(), *u) - leaves.begin();
            branch[i] = {static_cast<int>(leaf), c};
            if (const auto it = z.level_data.find(*u); it != z.level_data.end() && c < static_cast<int>(it->second.size())) {
                labels[i] = it->second[static_cast<std::size_t>(c)];
            }
        } else if (hd.in_hull(t)) {
            if (const auto it = z.hull_labels.find(t); it != z.hull_labels.end()) labels[i] = it->second;
        } else if (const auto it = z.free_labels.find(t); it != z.free_labels.end()) {
            labels[i] = it->second;
        }
    }

    const OracleEvaluator oracle(rule);
    const auto image = oracle.step(tb, labels);

    // first vertex seen per (leaf, coordinate)
    std::map<std::pair<int, int>, std::size_t> first;
    for (std::size_t i = 0; i < image.size(); ++i) {
        if (branch[i].first < 0) continue;
        const auto [it, fresh] = first.emplace(branch[i], i);
        if (fresh || image[it->second] == image[i]) continue;
        const Vertex& u = leaves[static_cast<std::size_t>(branch[i].first)];
        ZuResult bad;
        bad.pass = false;
        bad.witness = "branch of leaf " + u.text() + ", c=" + std::to_string(branch[i].second) + ": f(z) at " +
                      tb.vertices[it->second].text() + " is " + std::to_string(image[it->second]) + " but at " +
                      tb.vertices[i].text() + " is " + std::to_string(image[i]);
        return bad;
    }
    return {};
}

ZConfiguration random_z_configuration(const TreeParams& params, const Alphabet& alphabet, const VertexSet& points,
                                      int truncation, std::mt19937_64& rng) {
    const HullDecomposition hd = hull_decomposition(params, points);
    const auto symbol = [&] { return static_cast<Symbol>(uniform_below(rng, static_cast<std::uint64_t>(alphabet.size))); };
    ZConfiguration z;
    for (const auto& v : hd.hull()) {
        if (!hd.leaves().contains(v)) z.hull_labels[v] = symbol();
    }
    for (const auto& u : hd.leaves()) {
        auto& data = z.level_data[u];
        const auto length = uniform_below(rng, static_cast<std::uint64_t>(truncation) + 2);
        for (std::uint64_t c = 0; c < length; ++c) data.push_back(symbol());
    }
    for (const auto& t : ball(params, Vertex{}, truncation)) {
        if (hd.in_hull(t) || hd.component_of(t)) continue;
        if (const Symbol s = symbol(); s != 0) z.free_labels[t] = s;
    }
    return z;
}

nlohmann::json z_configuration_to_json(const ZConfiguration& z) {
    nlohmann::json hull = nlohmann::json::object();
    for (const auto& [v, s] : z.hull_labels) hull[v.text()] = s;
    nlohmann::json levels = nlohmann::json::object();
    for (const auto& [u, data] : z.level_data) levels[u.text()] = data;
    nlohmann::json free = nlohmann::json::object();
    for (const auto& [v, s] : z.free_labels) free[v.text()] = s;
    return {{"hull", std::move(hull)}, {"levels", std::move(levels)}, {"free", std::move(free)}};
}

ZConfiguration z_configuration_from_json(const nlohmann::json& doc) {
    ZConfiguration z;
    try {
        for (const auto& [key, s] : doc.at("hull").items()) z.hull_labels[Vertex::parse(key)] = s.get<Symbol>();
        for (const auto& [key, data] : doc.at("levels").items()) {
            z.level_data[Vertex::parse(key)] = data.get<std::vector<Symbol>>();
        }
        for (const auto& [key, s] : doc.at("free").items()) z.free_labels[Vertex::parse(key)] = s.get<Symbol>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("Z-configuration: ") + e.what());
    }
    return z;
}

SyndeticReport syndetic_return_probe(const Rule& rule, const std::vector<FiniteConfig>& samples, int rho,
                                     int horizon) {
    if (!rule.quiescent()) throw NonQuiescentError("syndetic probe needs a quiescent rule");
    SyndeticReport report;
    bool all_hit = true;
    int worst = 0;
    for (const auto& x : samples) {
        CompactConfig state(x);
        std::optional<int> hit;
        for (int n = 0; n <= horizon; ++n) {
            if (state.zero_within(rho)) {
                hit = n;
                break;
            }
            if (n < horizon) state.step(rule);
        }
        if (hit) {
            worst = std::max(worst, *hit);
        } else {
            all_hit = false;
        }
        report.first_hits.push_back(hit);
    }
    if (all_hit) report.max_first_hit = worst;
    return report;
}

}  // namespace treeca
