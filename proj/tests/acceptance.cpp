// Acceptance suite: the quantitative laws this library exists to exhibit,
// each with its threshold pinned in code and a pass/fail line on stdout.
// Exits nonzero if any criterion fails.

#include "witnesskit/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace witnesskit;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void run_criterion(int id, const std::string& title, std::optional<double> time_limit_s,
                   const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome{false, ""};
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = outcome.pass;
    std::string note = outcome.detail;
    if (time_limit_s && elapsed > *time_limit_s) {
        pass = false;
        note += (note.empty() ? "" : "; ") + std::string("over time limit");
    }
    std::printf("[%s] %02d %s (%.2fs)%s%s\n", pass ? "PASS" : "FAIL", id, title.c_str(), elapsed,
                note.empty() ? "" : " -- ", note.c_str());
    if (!pass) ++failures;
}

Outcome from_check(const EnumCheckResult& res) {
    std::ostringstream detail;
    detail << res.cases << " cases";
    if (!res.pass) detail << "; counterexample: " << res.counterexample;
    return {res.pass, detail.str()};
}

}  // namespace

int main() {
    // 1-2. Prefix-parity algebra, exhaustively.
    run_criterion(1, "par/unpar round-trip and bijection, exhaustive m <= 12", 10.0,
                  [] { return from_check(enumerate_check("par-unpar-bijection")); });
    run_criterion(2, "par linearity over xor, exhaustive m <= 8", std::nullopt,
                  [] { return from_check(enumerate_check("par-linearity")); });

    // 3-4. Square-root structure, exhaustively over small moduli.
    run_criterion(3, "four-root completeness for all odd prime pairs below 30", 30.0,
                  [] { return from_check(enumerate_check("four-roots")); });
    run_criterion(4, "factor extraction on exactly 4 of 6 root pairs", std::nullopt,
                  [] { return from_check(enumerate_check("factor-pairs")); });

    // 5. Blinding uniformity by exact enumeration.
    run_criterion(5, "blinded matrix is uniform and input-independent at m = 2, 3", 60.0,
                  [] { return from_check(enumerate_check("blinding-uniformity")); });

    // 6-7. The blinded parity experiment at scale.
    ExperimentConfig parity_cfg = default_config("parity");
    parity_cfg.m = 30;
    parity_cfg.k = 5;
    parity_cfg.trials = 10000;
    parity_cfg.master_seed = 42;
    ExperimentReport parity_report;
    run_criterion(6, "abort rate <= k/m + Hoeffding slack at m=30, k=5, 10000 trials", 60.0, [&] {
        parity_report = run_trials(parity_cfg);
        const double rate = parity_report.outcomes.at("abort").rate;
        const double bound = 1.0 / 6.0 + hoeffding_slack(parity_cfg.trials, 0.99);
        std::ostringstream detail;
        detail << "abort rate " << rate << " vs bound " << bound;
        return Outcome{rate <= bound, detail.str()};
    });
    run_criterion(7, "non-aborted parity decisions 100% correct, success >= 2/3", std::nullopt, [&] {
        const auto& wrong = parity_report.outcomes.at("decision_wrong");
        const double success = parity_report.outcomes.at("decision_correct").rate;
        std::ostringstream detail;
        detail << wrong.count << " wrong decisions, success rate " << success;
        return Outcome{wrong.count == 0 && success >= 2.0 / 3.0, detail.str()};
    });

    // 8. The per-unused-index factoring law.
    run_criterion(8, "unused indices factor at rate 1/2, overall success near certain", 120.0, [] {
        ExperimentConfig cfg = default_config("factor");
        cfg.prime_bits = 16;
        cfg.k = 5;
        cfg.trials = 1000;
        cfg.master_seed = 8;
        const auto report = run_trials(cfg);
        const auto& per = report.per_index;
        const double success = report.outcomes.at("factor").rate;
        // Every modulus here has at least 31 bits, so at least 26 unused indices.
        const double threshold = 1.0 - std::pow(2.0, -26.0) - 0.05;
        std::ostringstream detail;
        detail << "per-index rate " << per->rate << " wilson95 [" << per->wilson95.low << ", "
               << per->wilson95.high << "], success " << success << " vs " << threshold;
        return Outcome{per.has_value() && per->wilson95.contains(0.5) && success >= threshold,
                       detail.str()};
    });

    // 9. Collision extraction at scale.
    run_criterion(9, "collisions found in >= 99% of trials at n=1024, |n|=11, k=2", 60.0, [] {
        ExperimentConfig cfg = default_config("wphp");
        cfg.n = 1024;
        cfg.k = 2;
        cfg.seq_len = 0;  // 11, the bit length of n
        cfg.trials = 1000;
        cfg.master_seed = 11;
        const auto report = run_trials(cfg);
        if (report.config.seq_len != 11) return Outcome{false, "unexpected sequence length"};
        const double rate = report.outcomes.at("collision").rate;
        std::ostringstream detail;
        detail << "collision rate " << rate;
        return Outcome{rate >= 0.99, detail.str()};
    });

    // 10. Output counting for every shipped deterministic solver.
    run_criterion(10, "distinct outputs <= n^(seq_len(k+1)) = 256 at n=4, seq_len=2, k=1",
                  std::nullopt, [] { return from_check(enumerate_check("output-count")); });

    // 11. The generalized rows/budget split.
    run_criterion(11, "rows=64, budget=4 meets the 2/3 bound; rows=8 voids it and aborts past 1/3",
                  std::nullopt, [] {
                      ExperimentConfig wide = default_config("parity");
                      wide.m = 16;
                      wide.k = 4;
                      wide.rows = 64;
                      wide.trials = 10000;
                      wide.master_seed = 5;
                      const auto wide_report = run_trials(wide);

                      ExperimentConfig narrow = wide;
                      narrow.rows = 8;
                      const auto narrow_report = run_trials(narrow);

                      const double wide_success = wide_report.outcomes.at("decision_correct").rate;
                      const double narrow_abort = narrow_report.outcomes.at("abort").rate;
                      std::ostringstream detail;
                      detail << "wide success " << wide_success << ", narrow abort " << narrow_abort;
                      const bool pass = wide_report.parity_bound_valid_.value() &&
                                        wide_success >= 2.0 / 3.0 &&
                                        !narrow_report.parity_bound_valid_.value() &&
                                        narrow_abort > 1.0 / 3.0;
                      return Outcome{pass, detail.str()};
                  });

    // 12. Byte-identical reruns for every experiment type.
    run_criterion(12, "equal seeds give byte-identical JSON reports", std::nullopt, [] {
        std::vector<ExperimentConfig> configs;
        ExperimentConfig parity = default_config("parity");
        parity.trials = 300;
        parity.master_seed = 42;
        configs.push_back(parity);
        ExperimentConfig factor = default_config("factor");
        factor.trials = 50;
        factor.master_seed = 9;
        factor.prime_bits = 12;
        configs.push_back(factor);
        ExperimentConfig wphp = default_config("wphp");
        wphp.trials = 100;
        wphp.master_seed = 1;
        configs.push_back(wphp);
        for (const auto& cfg : configs) {
            const std::string once = report_to_json(run_trials(cfg)).dump();
            const std::string again = report_to_json(run_trials(cfg, 3)).dump();
            if (once != again) {
                return Outcome{false, cfg.experiment + " reports differ between runs"};
            }
        }
        return Outcome{true, "parity, factor, wphp all byte-identical"};
    });

    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
