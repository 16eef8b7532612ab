// Command-line front end: seeded experiments, exhaustive checks, and
// single-game transcript dumps. Reports go to stdout in the selected
// format; warnings and notes go to stderr.

#include "witnesskit/experiments.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace witnesskit;

unsigned thread_cap_from_env() {
    const char* env = std::getenv("WITNESSKIT_THREADS");
    if (!env) return 1;
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed < 1) return 1;
    return static_cast<unsigned>(parsed);
}

void emit_warnings(const ExperimentConfig& cfg) {
    if (cfg.experiment == "parity") {
        const std::size_t rows = cfg.rows == 0 ? cfg.m : cfg.rows;
        if (rows < 3 * cfg.k) {
            std::cerr << "warning: rows A=" << rows << " < 3*k=" << 3 * cfg.k
                      << ": the k/m abort bound is void for this configuration; running anyway\n";
        }
    } else if (cfg.experiment == "factor") {
        const std::size_t m_floor = cfg.factor_m != 0 ? cfg.factor_m : 2 * std::size_t(cfg.prime_bits) - 1;
        if (m_floor <= cfg.k) {
            std::cerr << "warning: sequence length m=" << m_floor << " <= k=" << cfg.k
                      << ": no unused index is guaranteed; running anyway\n";
        }
    } else if (cfg.experiment == "wphp") {
        const std::size_t len = cfg.seq_len == 0 ? bit_length(cfg.n) : cfg.seq_len;
        if (cfg.k + 1 >= len) {
            std::cerr << "warning: k=" << cfg.k << " >= seq_len-1=" << (len == 0 ? 0 : len - 1)
                      << ": the output-counting bound does not bite; running anyway\n";
        }
    }
}

// The pinned statistical assertions behind --assert. Thresholds mirror the
// probability laws the experiments are built to exhibit.
std::vector<std::string> failed_assertions(const ExperimentReport& report) {
    std::vector<std::string> failures;
    const ExperimentConfig& cfg = report.config;
    const double slack = hoeffding_slack(report.trials, 0.99);
    if (cfg.experiment == "parity") {
        const auto& wrong = report.outcomes.at("decision_wrong");
        if (wrong.count != 0) {
            failures.push_back("non-abort trials must always decide correctly; " +
                               std::to_string(wrong.count) + " wrong");
        }
        if (report.parity_bound_valid_ && *report.parity_bound_valid_) {
            const double bound =
                static_cast<double>(cfg.k) / static_cast<double>(cfg.rows) + slack;
            const double abort_rate = report.outcomes.at("abort").rate;
            if (abort_rate > bound) {
                failures.push_back("abort rate " + std::to_string(abort_rate) + " above k/A + slack = " +
                                   std::to_string(bound));
            }
            const double success = report.outcomes.at("decision_correct").rate;
            if (success < 2.0 / 3.0) {
                failures.push_back("success rate " + std::to_string(success) + " below 2/3");
            }
        }
    } else if (cfg.experiment == "factor") {
        const std::size_t m_floor = cfg.factor_m != 0 ? cfg.factor_m : 2 * std::size_t(cfg.prime_bits) - 1;
        if (m_floor > cfg.k) {
            const double threshold = 1.0 - std::pow(2.0, -double(m_floor - cfg.k)) - 0.05;
            const double success = report.outcomes.at("factor").rate;
            if (success < threshold) {
                failures.push_back("factor rate " + std::to_string(success) + " below " +
                                   std::to_string(threshold));
            }
        }
        if (report.per_index && report.per_index->samples > 0 && !report.per_index->wilson95.contains(0.5)) {
            failures.push_back("per-unused-index rate " + std::to_string(report.per_index->rate) +
                               " has Wilson 95% interval excluding 1/2");
        }
    } else if (cfg.experiment == "wphp") {
        const double rate = report.outcomes.at("collision").rate;
        if (rate < 0.99) {
            failures.push_back("collision rate " + std::to_string(rate) + " below 0.99");
        }
    }
    return failures;
}

int run_experiment(const ExperimentConfig& cfg, const std::string& format, bool assert_flag) {
    emit_warnings(cfg);
    const ExperimentReport report = run_trials(cfg, thread_cap_from_env());
    std::cerr << "effective config: " << config_to_json(report.config).dump() << "\n";
    std::cerr << "wall time: " << report.wall_ms << " ms\n";

    if (format == "json") {
        std::cout << report_to_json(report).dump(2) << "\n";
    } else if (format == "csv") {
        std::cout << report_to_csv(report);
    } else {
        std::cout << report_to_human(report);
    }

    if (assert_flag) {
        const auto failures = failed_assertions(report);
        for (const auto& f : failures) std::cerr << "assertion failed: " << f << "\n";
        if (!failures.empty()) return 1;
        std::cerr << "assertions passed\n";
    }
    return 0;
}

int run_verify(const std::string& check, const std::string& format) {
    std::vector<std::string> names;
    if (check == "all") {
        names = enumerate_check_names();
    } else {
        names.push_back(check);
    }
    bool all_pass = true;
    auto results = nlohmann::json::array();
    for (const auto& name : names) {
        const EnumCheckResult res = enumerate_check(name);
        all_pass = all_pass && res.pass;
        if (format == "json") {
            nlohmann::json j;
            j["check"] = res.check;
            j["pass"] = res.pass;
            j["cases"] = res.cases;
            if (!res.counterexample.empty()) j["counterexample"] = res.counterexample;
            results.push_back(j);
        } else {
            std::cout << res.check << ": " << (res.pass ? "PASS" : "FAIL") << " (" << res.cases
                      << " cases)";
            if (!res.counterexample.empty()) std::cout << "  counterexample: " << res.counterexample;
            std::cout << "\n";
        }
    }
    if (format == "json") std::cout << results.dump(2) << "\n";
    return all_pass ? 0 : 1;
}

int run_transcript(const ExperimentConfig& cfg) {
    emit_warnings(cfg);
    std::cerr << "effective config: " << config_to_json(resolved_config(cfg)).dump() << "\n";
    if (cfg.experiment == "parity") {
        const ParityTrial trial = parity_run_one(cfg, 0);
        std::cerr << "input: " << trial.input.to_string()
                  << "  parity: " << parity_bit(trial.input) << "\n";
        std::cout << transcript_to_json(*trial.outcome.transcript).dump(2) << "\n";
        return 0;
    }
    if (cfg.experiment == "factor") {
        const FactorTrial trial = factor_run_one(cfg, 0);
        std::cerr << "n: " << trial.modulus.n.str() << "\n";
        if (trial.outcome.transcript) {
            std::cout << transcript_to_json(*trial.outcome.transcript).dump(2) << "\n";
        } else {
            std::cerr << "a sampled value shared a factor with n; no game was played\n";
            std::cout << "null\n";
        }
        return 0;
    }
    if (cfg.experiment == "wphp") {
        const WphpTrial trial = wphp_run_one(cfg, 0);
        std::cout << transcript_to_json(*trial.outcome.transcript).dump(2) << "\n";
        return 0;
    }
    throw std::invalid_argument("unknown experiment id: " + cfg.experiment);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"witnesskit: budgeted preimage games, blinding and factoring reductions, "
                 "and the probability laws they obey, at desk scale"};
    app.require_subcommand(1);

    std::string format = "human";
    bool assert_flag = false;
    std::uint64_t seed = 0;
    std::size_t trials = 1000;
    std::string n_text = "1024";
    std::string solver;
    std::string check_name;
    ExperimentConfig parity_cfg = default_config("parity");
    ExperimentConfig factor_cfg = default_config("factor");
    ExperimentConfig wphp_cfg = default_config("wphp");
    std::string transcript_experiment;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--trials", trials, "number of independent trials")->capture_default_str();
        sub->add_option("--seed", seed, "master seed; fully determines the report")
            ->capture_default_str();
        sub->add_option("--format", format, "output format on stdout")
            ->check(CLI::IsMember({"json", "csv", "human"}))
            ->capture_default_str();
        sub->add_flag("--assert", assert_flag,
                      "exit 1 unless the built-in statistical assertions hold");
    };

    CLI::App* parity = app.add_subcommand(
        "parity", "blinded prefix-parity game: abort rate <= k/rows, decisions always correct");
    parity->add_option("--m", parity_cfg.m, "vector length")->capture_default_str();
    parity->add_option("--k", parity_cfg.k, "query budget")->capture_default_str();
    parity->add_option("--rows", parity_cfg.rows, "matrix rows A; 0 = m (generalized budget demo)")
        ->capture_default_str();
    parity->add_option("--solver", solver, "omniscient | scripted")->default_str("scripted");
    add_common(parity);

    CLI::App* factor = app.add_subcommand(
        "factor", "square-root game: each unused index factors n with probability 1/2");
    factor->add_option("--prime-bits", factor_cfg.prime_bits, "bit size of each prime")
        ->capture_default_str();
    factor->add_option("--k", factor_cfg.k, "query budget")->capture_default_str();
    factor->add_option("--m", factor_cfg.factor_m, "sequence length; 0 = bit length of n")
        ->capture_default_str();
    factor->add_option("--solver", solver, "canonical")->default_str("canonical");
    add_common(factor);

    CLI::App* wphp = app.add_subcommand(
        "wphp", "preimage game under a shrinking map: witnesses yield hash collisions");
    wphp->add_option("--n", n_text, "codomain bound (decimal)")->capture_default_str();
    wphp->add_option("--k", wphp_cfg.k, "query budget")->capture_default_str();
    wphp->add_option("--seq-len", wphp_cfg.seq_len, "sequence length; 0 = bit length of n")
        ->capture_default_str();
    wphp->add_option("--solver", solver, "canonical | constant")->default_str("canonical");
    add_common(wphp);

    CLI::App* verify = app.add_subcommand("verify", "run an exact-enumeration check");
    verify->add_option("--check", check_name, "check id, or 'all'")->required();
    verify->add_option("--format", format, "output format on stdout")
        ->check(CLI::IsMember({"json", "human"}))
        ->capture_default_str();

    CLI::App* transcript = app.add_subcommand("transcript", "run one seeded game and dump its JSON");
    transcript->add_option("--experiment", transcript_experiment, "parity | factor | wphp")->required();
    transcript->add_option("--m", parity_cfg.m, "parity: vector length")->capture_default_str();
    transcript->add_option("--k", parity_cfg.k, "query budget")->capture_default_str();
    transcript->add_option("--rows", parity_cfg.rows, "parity: matrix rows A; 0 = m")
        ->capture_default_str();
    transcript->add_option("--prime-bits", factor_cfg.prime_bits, "factor: bit size of each prime")
        ->capture_default_str();
    transcript->add_option("--n", n_text, "wphp: codomain bound (decimal)")->capture_default_str();
    transcript->add_option("--seq-len", wphp_cfg.seq_len, "wphp: sequence length; 0 = |n|")
        ->capture_default_str();
    transcript->add_option("--seed", seed, "master seed")->capture_default_str();
    transcript->add_option("--solver", solver, "solver id for the chosen experiment");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(verify)) {
            return run_verify(check_name, format);
        }

        auto finish_config = [&](ExperimentConfig cfg) {
            cfg.trials = trials;
            cfg.master_seed = seed;
            if (!solver.empty()) cfg.solver = solver;
            return cfg;
        };

        if (app.got_subcommand(parity)) {
            return run_experiment(finish_config(parity_cfg), format, assert_flag);
        }
        if (app.got_subcommand(factor)) {
            return run_experiment(finish_config(factor_cfg), format, assert_flag);
        }
        if (app.got_subcommand(wphp)) {
            wphp_cfg.n = nat_from_text(n_text);
            return run_experiment(finish_config(wphp_cfg), format, assert_flag);
        }
        if (app.got_subcommand(transcript)) {
            ExperimentConfig cfg;
            if (transcript_experiment == "parity") {
                cfg = parity_cfg;
            } else if (transcript_experiment == "factor") {
                cfg = factor_cfg;
            } else if (transcript_experiment == "wphp") {
                cfg = wphp_cfg;
                cfg.n = nat_from_text(n_text);
            } else {
                throw std::invalid_argument("unknown experiment id: " + transcript_experiment);
            }
            // --k is shared across the experiments here; parity_cfg.k holds it.
            if (transcript->count("--k") > 0) cfg.k = parity_cfg.k;
            cfg = finish_config(cfg);
            cfg.trials = 1;
            return run_transcript(cfg);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
