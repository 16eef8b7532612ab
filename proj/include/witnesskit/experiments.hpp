#pragma once

#include "witnesskit/bitvec.hpp"
#include "witnesskit/numtheory.hpp"
#include "witnesskit/protocol.hpp"
#include "witnesskit/reductions.hpp"
#include "witnesskit/rng.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace witnesskit {

// Seeded Monte Carlo runner and exact-enumeration verifier. Trial i of a
// run draws every random value from RandomStream(master_seed, i), so a
// report is a pure function of its config and reruns are byte-identical.

inline const char* kSeedRule =
    "trial i draws 64-bit words w_j = mix64(key + j*0x9E3779B97F4A7C15) with "
    "key = mix64(master_seed + i*0xBF58476D1CE4E5B9); mix64 is the SplitMix64 "
    "finalizer (see README, Deterministic randomness)";

// ---------------------------------------------------------------------------
// Interval statistics
// ---------------------------------------------------------------------------

struct WilsonInterval {
    double low = 0;
    double high = 1;
    bool contains(double p) const { return low <= p && p <= high; }
};

// Two-sided normal quantile by bisection on erf; good to ~1e-12.
inline double z_for_confidence(double confidence) {
    if (!(confidence > 0 && confidence < 1)) {
        throw std::domain_error("z_for_confidence: confidence must lie in (0, 1)");
    }
    double lo = 0, hi = 10;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std::erf(mid / std::sqrt(2.0)) < confidence) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                      double confidence = 0.95) {
    if (trials < 1) throw std::domain_error("wilson_interval: trials must be >= 1");
    if (successes > trials) throw std::domain_error("wilson_interval: successes exceed trials");
    const double n = static_cast<double>(trials);
    const double p_hat = static_cast<double>(successes) / n;
    const double z = z_for_confidence(confidence);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p_hat + z2 / (2.0 * n)) / denom;
    const double half = (z / denom) * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n));
    WilsonInterval w;
    w.low = std::max(0.0, center - half);
    w.high = std::min(1.0, center + half);
    return w;
}

// Two-sided Hoeffding deviation bound: with probability >= confidence an
// observed rate sits within this slack of the true rate.
inline double hoeffding_slack(std::uint64_t trials, double confidence = 0.99) {
    if (trials < 1) throw std::domain_error("hoeffding_slack: trials must be >= 1");
    return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(trials)));
}

// ---------------------------------------------------------------------------
// Experiment configuration and reports
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    std::string experiment;  // parity | factor | wphp | enumerate
    std::size_t trials = 1000;
    std::uint64_t master_seed = 0;
    std::string solver;

    // parity
    std::size_t m = 30;
    std::size_t k = 5;
    std::size_t rows = 0;  // 0 = m

    // factor (shares k)
    unsigned prime_bits = 16;
    std::size_t factor_m = 0;  // 0 = bit length of the sampled n

    // wphp (shares k)
    Nat n = 1024;
    std::size_t seq_len = 0;  // 0 = bit length of n

    // enumerate
    std::string check;
};

inline ExperimentConfig default_config(const std::string& experiment) {
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    if (experiment == "parity") {
        cfg.solver = "scripted";
        cfg.m = 30;
        cfg.k = 5;
    } else if (experiment == "factor") {
        cfg.solver = "canonical";
        cfg.prime_bits = 16;
        cfg.k = 5;
    } else if (experiment == "wphp") {
        cfg.solver = "canonical";
        cfg.n = 1024;
        cfg.k = 2;
    } else if (experiment == "enumerate") {
        cfg.trials = 1;
    } else {
        throw std::invalid_argument("unknown experiment id: " + experiment);
    }
    return cfg;
}

struct OutcomeStat {
    std::uint64_t count = 0;
    double rate = 0;
    WilsonInterval wilson95;
};

struct PerIndexStat {
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;
    double rate = 0;
    WilsonInterval wilson95;
};

struct ExperimentReport {
    ExperimentConfig config;  // with defaults resolved where global
    std::uint64_t trials = 0;
    std::map<std::string, OutcomeStat> outcomes;
    double hoeffding_slack99 = 0;
    std::optional<PerIndexStat> per_index;     // factor runs only
    std::optional<bool> parity_bound_valid_;   // parity runs only
    std::string note;                          // e.g. enumerate counterexample
    std::string seed_rule = kSeedRule;
    double wall_ms = 0;  // diagnostic only; deliberately absent from JSON/CSV
};

// ---------------------------------------------------------------------------
// Per-trial entry points (trial i is fully determined by master_seed and i)
// ---------------------------------------------------------------------------

struct ParityTrial {
    BitVec input;
    ParityOutcome outcome;
};

struct FactorTrial {
    RabinModulus modulus;
    FactorOutcome outcome;
};

struct WphpTrial {
    WphpOutcome outcome;
};

inline std::unique_ptr<SolverStrategy<BitVec>> make_parity_solver(const std::string& id,
                                                                  std::size_t queries) {
    if (id == "omniscient") return std::make_unique<OmniscientParitySolver>();
    if (id == "scripted") return std::make_unique<ScriptedParitySolver>(queries);
    throw std::invalid_argument("unknown parity solver id: " + id);
}

inline ParityTrial parity_run_one(const ExperimentConfig& cfg, std::uint64_t ordinal) {
    RandomStream rng(cfg.master_seed, ordinal);
    ParityConfig pcfg{cfg.m, cfg.k, cfg.rows};
    const BitVec input = random_bitvec(rng, cfg.m);
    auto solver = make_parity_solver(cfg.solver, cfg.k);
    ParityTrial trial{input, parity_decider(input, pcfg, *solver, rng)};
    return trial;
}

inline FactorTrial factor_run_one(const ExperimentConfig& cfg, std::uint64_t ordinal) {
    if (cfg.solver != "canonical") throw std::invalid_argument("unknown factor solver id: " + cfg.solver);
    RandomStream rng(cfg.master_seed, ordinal);
    FactoringConfig fcfg{cfg.prime_bits, cfg.k, cfg.factor_m};
    RabinModulus modulus = RabinModulus::sample(cfg.prime_bits, rng);
    CheatingRootSolver solver(modulus, cfg.k);
    FactorOutcome outcome = factoring_attack(modulus, fcfg, solver, rng);
    return FactorTrial{std::move(modulus), std::move(outcome)};
}

inline std::unique_ptr<SolverStrategy<Nat>> make_wphp_solver(const std::string& id, std::size_t queries) {
    if (id == "canonical") {
        return std::make_unique<CanonicalPreimageSolver>(queries, [](const Nat& z) { return z; });
    }
    if (id == "constant") return std::make_unique<ConstantSolver>(Nat(0));
    throw std::invalid_argument("unknown wphp solver id: " + id);
}

inline WphpTrial wphp_run_one(const ExperimentConfig& cfg, std::uint64_t ordinal) {
    RandomStream rng(cfg.master_seed, ordinal);
    WphpConfig wcfg = WphpConfig::mod_hash(cfg.n, cfg.k, cfg.seq_len);
    auto solver = make_wphp_solver(cfg.solver, cfg.k);
    return WphpTrial{wphp_attack(wcfg, *solver, rng)};
}

// ---------------------------------------------------------------------------
// Exact-enumeration checks
// ---------------------------------------------------------------------------

struct EnumCheckResult {
    std::string check;
    bool pass = false;
    std::uint64_t cases = 0;
    std::string counterexample;  // first failing witness, empty on pass
};

namespace detail {

inline BitVec bitvec_of_uint(std::uint64_t value, std::size_t m) {
    BitVec v(m);
    for (std::size_t i = 0; i < m; ++i) v.set(i, (value >> i) & 1);
    return v;
}

inline std::vector<Nat> odd_primes_below(unsigned bound) {
    std::vector<Nat> primes;
    for (unsigned p = 3; p < bound; p += 2) {
        if (is_probable_prime(Nat(p))) primes.emplace_back(p);
    }
    return primes;
}

// All square roots of every unit residue, found the slow way.
inline std::map<Nat, std::vector<Nat>> roots_by_square(const Nat& n) {
    std::map<Nat, std::vector<Nat>> buckets;
    for (Nat x = 1; x < n; ++x) {
        if (gcd(x, n) != 1) continue;
        buckets[(x * x) % n].push_back(x);
    }
    return buckets;
}

inline EnumCheckResult check_par_unpar_bijection() {
    EnumCheckResult res{"par-unpar-bijection"};
    for (std::size_t m = 1; m <= 12; ++m) {
        std::vector<bool> image(std::size_t(1) << m, false);
        std::uint64_t distinct = 0;
        for (std::uint64_t v = 0; v < (std::uint64_t(1) << m); ++v) {
            const BitVec y = bitvec_of_uint(v, m);
            const BitVec x = par(y);
            if (unpar(x) != y || par(unpar(y)) != y) {
                res.counterexample = "m=" + std::to_string(m) + " y=" + y.to_string();
                return res;
            }
            std::uint64_t code = 0;
            const BitVec u = unpar(y);
            for (std::size_t i = 0; i < m; ++i) code |= std::uint64_t(u.get(i)) << i;
            if (!image[code]) {
                image[code] = true;
                ++distinct;
            }
            ++res.cases;
        }
        if (distinct != (std::uint64_t(1) << m)) {
            res.counterexample = "m=" + std::to_string(m) + " image size " + std::to_string(distinct);
            return res;
        }
    }
    res.pass = true;
    return res;
}

inline EnumCheckResult check_par_linearity() {
    EnumCheckResult res{"par-linearity"};
    for (std::size_t m = 1; m <= 8; ++m) {
        for (std::uint64_t b = 0; b < (std::uint64_t(1) << m); ++b) {
            for (std::uint64_t c = 0; c < (std::uint64_t(1) << m); ++c) {
                const BitVec vb = bitvec_of_uint(b, m);
                const BitVec vc = bitvec_of_uint(c, m);
                if (par(vb ^ vc) != (par(vb) ^ par(vc))) {
                    res.counterexample =
                        "m=" + std::to_string(m) + " B=" + vb.to_string() + " C=" + vc.to_string();
                    return res;
                }
                ++res.cases;
            }
        }
    }
    res.pass = true;
    return res;
}

inline EnumCheckResult check_four_roots() {
    EnumCheckResult res{"four-roots"};
    const auto primes = odd_primes_below(30);
    for (std::size_t a = 0; a < primes.size(); ++a) {
        for (std::size_t b = a + 1; b < primes.size(); ++b) {
            const RabinModulus modulus = RabinModulus::from_primes(primes[a], primes[b]);
            for (auto& [c, roots] : roots_by_square(modulus.n)) {
                std::vector<Nat> expected = roots;
                std::sort(expected.begin(), expected.end());
                std::string where = "n=" + modulus.n.str() + " c=" + c.str();
                if (expected.size() != 4) {
                    res.counterexample = where + " has " + std::to_string(expected.size()) + " roots";
                    return res;
                }
                const RootQuad quad = four_roots(c, modulus);
                for (int i = 0; i < 4; ++i) {
                    if (quad.roots[i] != expected[i]) {
                        res.counterexample = where + " root mismatch";
                        return res;
                    }
                }
                if (quad.roots[0] + quad.roots[3] != modulus.n ||
                    quad.roots[1] + quad.roots[2] != modulus.n) {
                    res.counterexample = where + " roots do not pair to n";
                    return res;
                }
                ++res.cases;
            }
        }
    }
    res.pass = true;
    return res;
}

inline EnumCheckResult check_factor_pairs() {
    EnumCheckResult res{"factor-pairs"};
    const auto primes = odd_primes_below(30);
    for (std::size_t a = 0; a < primes.size(); ++a) {
        for (std::size_t b = a + 1; b < primes.size(); ++b) {
            const RabinModulus modulus = RabinModulus::from_primes(primes[a], primes[b]);
            for (auto& [c, roots] : roots_by_square(modulus.n)) {
                const RootQuad quad = four_roots(c, modulus);
                for (int i = 0; i < 4; ++i) {
                    for (int j = i + 1; j < 4; ++j) {
                        const bool pairs_to_n = quad.roots[i] + quad.roots[j] == modulus.n;
                        const auto factor = factor_from_roots(quad.roots[i], quad.roots[j], modulus.n);
                        const bool ok = pairs_to_n
                                            ? !factor.has_value()
                                            : (factor && (*factor == modulus.p || *factor == modulus.q));
                        if (!ok) {
                            res.counterexample = "n=" + modulus.n.str() + " c=" + c.str() + " pair (" +
                                                 quad.roots[i].str() + "," + quad.roots[j].str() + ")";
                            return res;
                        }
                        ++res.cases;
                    }
                }
            }
        }
    }
    res.pass = true;
    return res;
}

inline EnumCheckResult check_blinding_uniformity() {
    EnumCheckResult res{"blinding-uniformity"};
    for (std::size_t m : {std::size_t(2), std::size_t(3)}) {
        const std::uint64_t vec_space = std::uint64_t(1) << m;
        std::uint64_t u_space = 1;
        for (std::size_t i = 0; i < m; ++i) u_space *= vec_space;
        for (std::uint64_t input_code = 0; input_code < vec_space; ++input_code) {
            const BitVec input = bitvec_of_uint(input_code, m);
            std::set<std::pair<std::string, std::size_t>> seen;
            for (std::uint64_t u_code = 0; u_code < u_space; ++u_code) {
                std::vector<BitVec> u;
                u.reserve(m);
                std::uint64_t rem = u_code;
                for (std::size_t i = 0; i < m; ++i) {
                    u.push_back(bitvec_of_uint(rem % vec_space, m));
                    rem /= vec_space;
                }
                for (std::size_t r = 0; r < m; ++r) {
                    const BitMatrix y = blind(input, u, r);
                    if (!seen.emplace(y.to_string(), r).second) {
                        res.counterexample = "m=" + std::to_string(m) + " I=" + input.to_string() +
                                             " duplicate (Y,r) at r=" + std::to_string(r);
                        return res;
                    }
                    ++res.cases;
                }
            }
            // Each (Y, r) hit exactly once: uniform, and the full space for
            // every input, so the view is input-independent.
            if (seen.size() != u_space * m) {
                res.counterexample = "m=" + std::to_string(m) + " I=" + input.to_string() +
                                     " image size " + std::to_string(seen.size());
                return res;
            }
        }
    }
    res.pass = true;
    return res;
}

inline EnumCheckResult check_output_count() {
    EnumCheckResult res{"output-count"};
    const std::uint64_t bound = 256;  // 4^(2*(1+1))
    for (const std::string id : {"canonical", "constant"}) {
        WphpConfig cfg = WphpConfig::mod_hash(4, 1, 2);
        auto solver = make_wphp_solver(id, cfg.k);
        const std::uint64_t count = output_count_audit(cfg, *solver);
        if (count > bound) {
            res.counterexample = "solver " + id + " emitted " + std::to_string(count) + " outputs";
            return res;
        }
        res.cases += 256;
    }
    res.pass = true;
    return res;
}

}  // namespace detail

inline std::vector<std::string> enumerate_check_names() {
    return {"par-unpar-bijection", "par-linearity",       "four-roots",
            "factor-pairs",        "blinding-uniformity", "output-count"};
}

inline EnumCheckResult enumerate_check(const std::string& name) {
    if (name == "par-unpar-bijection") return detail::check_par_unpar_bijection();
    if (name == "par-linearity") return detail::check_par_linearity();
    if (name == "four-roots") return detail::check_four_roots();
    if (name == "factor-pairs") return detail::check_factor_pairs();
    if (name == "blinding-uniformity") return detail::check_blinding_uniformity();
    if (name == "output-count") return detail::check_output_count();
    throw std::invalid_argument("unknown check id: " + name);
}

// ---------------------------------------------------------------------------
// Budget hierarchy demo (generalized rows/budget parameters)
// ---------------------------------------------------------------------------

// The generalized game demands A = |n| witnesses against a budget of
// B = k * ||n||^k queries. The quantitative content is the growth gap
// between the two; the table lists where the abort bound holds.
struct HierarchyDemoRow {
    std::size_t n_bits;    // |n|
    std::size_t k;
    std::size_t rows;      // A = |n|
    std::size_t budget;    // B = k * ||n||^k  with ||n|| = bit length of |n|
    bool bound_valid;      // A >= 3B
};

inline std::vector<HierarchyDemoRow> hierarchy_demo_table() {
    std::vector<HierarchyDemoRow> table;
    for (std::size_t n_bits : {64, 256, 1024}) {
        const std::size_t len_len = bit_length(Nat(n_bits));
        for (std::size_t k = 1; k <= 3; ++k) {
            std::size_t budget = k;
            for (std::size_t i = 0; i < k; ++i) budget *= len_len;
            table.push_back({n_bits, k, n_bits, budget, n_bits >= 3 * budget});
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Trial aggregation
// ---------------------------------------------------------------------------

namespace detail {

struct TrialRecord {
    std::string label;
    std::uint64_t unused = 0;
    std::uint64_t hits = 0;
};

inline TrialRecord run_single_trial(const ExperimentConfig& cfg, std::uint64_t ordinal) {
    if (cfg.experiment == "parity") {
        const ParityTrial trial = parity_run_one(cfg, ordinal);
        if (std::holds_alternative<ParityAbort>(trial.outcome.result)) return {"abort"};
        const int decided = std::get<ParityDecision>(trial.outcome.result).bit;
        return {decided == parity_bit(trial.input) ? "decision_correct" : "decision_wrong"};
    }
    if (cfg.experiment == "factor") {
        const FactorTrial trial = factor_run_one(cfg, ordinal);
        TrialRecord rec;
        rec.label = std::holds_alternative<Factor>(trial.outcome.result) ? "factor" : "factor_fail";
        rec.unused = trial.outcome.unused_indices;
        rec.hits = trial.outcome.unused_factor_hits;
        return rec;
    }
    if (cfg.experiment == "wphp") {
        const WphpTrial trial = wphp_run_one(cfg, ordinal);
        return {std::holds_alternative<Collision<Nat>>(trial.outcome.result) ? "collision"
                                                                             : "collision_fail"};
    }
    throw std::invalid_argument("unknown experiment id: " + cfg.experiment);
}

inline std::vector<std::string> label_set(const std::string& experiment) {
    if (experiment == "parity") return {"abort", "decision_correct", "decision_wrong"};
    if (experiment == "factor") return {"factor", "factor_fail"};
    if (experiment == "wphp") return {"collision", "collision_fail"};
    if (experiment == "enumerate") return {"fail", "pass"};
    throw std::invalid_argument("unknown experiment id: " + experiment);
}

}  // namespace detail

// Config with the globally resolvable defaults filled in; what reports echo.
inline ExperimentConfig resolved_config(ExperimentConfig cfg) {
    if (cfg.experiment == "parity" && cfg.rows == 0) cfg.rows = cfg.m;
    if (cfg.experiment == "wphp" && cfg.seq_len == 0) cfg.seq_len = bit_length(cfg.n);
    return cfg;
}

// Runs `trials` independent trials and folds the outcomes in ordinal
// order. The thread count changes nothing but the wall time.
inline ExperimentReport run_trials(const ExperimentConfig& cfg, unsigned threads = 1) {
    if (cfg.trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();

    ExperimentReport report;
    report.config = resolved_config(cfg);
    report.trials = cfg.trials;
    report.hoeffding_slack99 = hoeffding_slack(cfg.trials, 0.99);

    std::vector<detail::TrialRecord> records(cfg.trials);
    if (cfg.experiment == "enumerate") {
        const EnumCheckResult check = enumerate_check(cfg.check);
        records.assign(1, {check.pass ? "pass" : "fail"});
        report.trials = 1;
        report.note = check.counterexample;
    } else if (threads <= 1 || cfg.trials < 2) {
        for (std::uint64_t i = 0; i < cfg.trials; ++i) records[i] = detail::run_single_trial(cfg, i);
    } else {
        const unsigned workers = std::min<unsigned>(threads, cfg.trials);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        std::exception_ptr first_error;
        std::mutex error_mutex;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::uint64_t i = w; i < cfg.trials; i += workers) {
                        records[i] = detail::run_single_trial(cfg, i);
                    }
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    std::map<std::string, std::uint64_t> counts;
    for (const std::string& label : detail::label_set(cfg.experiment)) counts[label] = 0;
    std::uint64_t samples = 0, hits = 0;
    for (const auto& rec : records) {
        ++counts.at(rec.label);
        samples += rec.unused;
        hits += rec.hits;
    }
    for (const auto& [label, count] : counts) {
        OutcomeStat stat;
        stat.count = count;
        stat.rate = static_cast<double>(count) / static_cast<double>(report.trials);
        stat.wilson95 = wilson_interval(count, report.trials, 0.95);
        report.outcomes[label] = stat;
    }
    if (cfg.experiment == "factor" && samples > 0) {
        PerIndexStat per;
        per.samples = samples;
        per.hits = hits;
        per.rate = static_cast<double>(hits) / static_cast<double>(samples);
        per.wilson95 = wilson_interval(hits, samples, 0.95);
        report.per_index = per;
    }
    if (cfg.experiment == "parity") {
        report.parity_bound_valid_ =
            parity_bound_valid(ParityConfig{cfg.m, cfg.k, report.config.rows});
    }

    report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

// ---------------------------------------------------------------------------
// Serialization: canonical JSON (sorted keys), CSV, and a human layout.
// Wall time never enters the first two, so reruns are byte-identical.
// ---------------------------------------------------------------------------

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["experiment"] = cfg.experiment;
    j["trials"] = cfg.trials;
    j["master_seed"] = cfg.master_seed;
    if (cfg.experiment == "parity") {
        j["solver"] = cfg.solver;
        j["m"] = cfg.m;
        j["k"] = cfg.k;
        j["rows"] = cfg.rows;
    } else if (cfg.experiment == "factor") {
        j["solver"] = cfg.solver;
        j["prime_bits"] = cfg.prime_bits;
        j["k"] = cfg.k;
        j["m"] = cfg.factor_m;  // 0 = per-trial bit length of n
    } else if (cfg.experiment == "wphp") {
        j["solver"] = cfg.solver;
        j["n"] = text_of(cfg.n);
        j["k"] = cfg.k;
        j["seq_len"] = cfg.seq_len;
    } else if (cfg.experiment == "enumerate") {
        j["check"] = cfg.check;
    }
    return j;
}

inline nlohmann::json report_to_json(const ExperimentReport& report) {
    nlohmann::json j;
    j["config"] = config_to_json(report.config);
    j["trials"] = report.trials;
    j["hoeffding_slack99"] = report.hoeffding_slack99;
    nlohmann::json outcomes;
    for (const auto& [label, stat] : report.outcomes) {
        outcomes[label] = {
            {"count", stat.count},
            {"rate", stat.rate},
            {"wilson95", {stat.wilson95.low, stat.wilson95.high}},
        };
    }
    j["outcomes"] = outcomes;
    if (report.per_index) {
        j["per_index"] = {
            {"samples", report.per_index->samples},
            {"hits", report.per_index->hits},
            {"rate", report.per_index->rate},
            {"wilson95", {report.per_index->wilson95.low, report.per_index->wilson95.high}},
        };
    }
    if (report.parity_bound_valid_) j["parity_bound_valid"] = *report.parity_bound_valid_;
    if (!report.note.empty()) j["note"] = report.note;
    j["seed_rule"] = report.seed_rule;
    return j;
}

inline std::string report_to_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "outcome,count,trials,rate,wilson95_low,wilson95_high\n";
    for (const auto& [label, stat] : report.outcomes) {
        out << label << ',' << stat.count << ',' << report.trials << ',' << stat.rate << ','
            << stat.wilson95.low << ',' << stat.wilson95.high << '\n';
    }
    return out.str();
}

inline std::string report_to_human(const ExperimentReport& report) {
    std::ostringstream out;
    out << "experiment: " << report.config.experiment << "\n";
    out << "config: " << config_to_json(report.config).dump() << "\n";
    if (report.parity_bound_valid_) {
        out << "abort bound valid (rows >= 3k): " << (*report.parity_bound_valid_ ? "yes" : "no") << "\n";
    }
    out << "trials: " << report.trials << "   hoeffding slack (99%): " << report.hoeffding_slack99
        << "\n";
    for (const auto& [label, stat] : report.outcomes) {
        out << "  " << label << ": " << stat.count << "  rate " << stat.rate << "  wilson95 ["
            << stat.wilson95.low << ", " << stat.wilson95.high << "]\n";
    }
    if (report.per_index) {
        out << "  per unused index: " << report.per_index->hits << "/" << report.per_index->samples
            << "  rate " << report.per_index->rate << "  wilson95 [" << report.per_index->wilson95.low
            << ", " << report.per_index->wilson95.high << "]\n";
    }
    if (!report.note.empty()) out << "note: " << report.note << "\n";
    return out.str();
}

}  // namespace witnesskit
