#pragma once

#include "witnesskit/bitvec.hpp"
#include "witnesskit/numtheory.hpp"
#include "witnesskit/protocol.hpp"
#include "witnesskit/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace witnesskit {

// The three reductions, each phrased as a preimage game plus an extraction
// step: parity blinding (decide total parity from a prefix-parity solver),
// Rabin factoring (pull a factor out of a square-root solver), and
// collision extraction (pull a hash collision out of a preimage solver).
//
// The solvers defined here are test doubles standing in for algorithms
// whose existence the underlying analysis derives and then refutes. The
// ones that hold instance secrets are flagged `cheating`; the secret stays
// inside the solver object and never reaches a transcript.

namespace detail {

template <class V>
std::optional<V> last_answer_for(const std::vector<Round<V>>& history, std::size_t index) {
    std::optional<V> found;
    for (const auto& r : history) {
        if (r.index == index && r.answer) found = r.answer;
    }
    return found;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Parity blinding
// ---------------------------------------------------------------------------

// Hide input I in row r of an otherwise random matrix: row i is the
// prefix-parity preimage of U_i, except row r which additionally carries I.
// For fixed I the map (U, r) -> (matrix, r) is a bijection, so the matrix
// alone says nothing about I.
inline BitMatrix blind(const BitVec& input, const std::vector<BitVec>& u, std::size_t r) {
    if (r >= u.size()) throw std::domain_error("blind: row choice out of range");
    const std::size_t m = input.size();
    std::vector<BitVec> rows;
    rows.reserve(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i].size() != m) throw std::domain_error("blind: row length mismatch");
        BitVec v = unpar(u[i]);
        rows.push_back(i == r ? (input ^ v) : std::move(v));
    }
    return BitMatrix(std::move(rows));
}

// Unmask the solver's answer for the hidden row: U_r xor W_r equals the
// parity vector of the original input whenever W_r is the parity vector of
// the blinded row.
inline BitVec recover_parity(const BitVec& u_r, const BitVec& w_r) { return u_r ^ w_r; }

struct ParityConfig {
    std::size_t m = 30;    // vector length
    std::size_t k = 5;     // query budget
    std::size_t rows = 0;  // matrix rows; 0 means m (the square case)

    std::size_t effective_rows() const { return rows == 0 ? m : rows; }
};

// The abort bound only holds with room to hide: at least three rows per
// possible distinct query.
inline bool parity_bound_valid(const ParityConfig& cfg) {
    return cfg.effective_rows() >= 3 * cfg.k;
}

struct ParityDecision {
    int bit = 0;
    bool operator==(const ParityDecision&) const = default;
};
struct ParityAbort {
    bool operator==(const ParityAbort&) const = default;
};
struct Factor {
    Nat value;
    bool operator==(const Factor&) const = default;
};
struct FactorFail {
    bool operator==(const FactorFail&) const = default;
};
struct CollisionFail {
    bool operator==(const CollisionFail&) const = default;
};

template <class V>
struct ReductionOutcome {
    std::variant<ParityDecision, ParityAbort, Factor, FactorFail, Collision<Nat>, CollisionFail> result;
    std::optional<Transcript<V>> transcript;
    // Factoring scan detail: indices never queried, and how many of them
    // produced a factor. Zero for the other reductions.
    std::size_t unused_indices = 0;
    std::size_t unused_factor_hits = 0;
};

using ParityOutcome = ReductionOutcome<BitVec>;
using FactorOutcome = ReductionOutcome<Nat>;
using WphpOutcome = ReductionOutcome<Nat>;

// Solver that computes parity vectors outright and never queries.
class OmniscientParitySolver : public SolverStrategy<BitVec> {
  public:
    bool deterministic() const override { return true; }
    std::optional<SolverOutput<BitVec>> propose(const PreimageInstance<BitVec>& instance,
                                                const std::vector<Round<BitVec>>&) override {
        Witnesses<BitVec> wit;
        wit.w.reserve(instance.m);
        for (const auto& row : instance.targets) wit.w.push_back(par(row));
        return SolverOutput<BitVec>(std::move(wit));
    }
    std::size_t next_query(const PreimageInstance<BitVec>&, const std::vector<Round<BitVec>>&) override {
        return 0;  // never reached: the first proposal is always accepted
    }
};

// Sound solver with a fixed query pattern: asks for rows 0..q-1 in order,
// then emits a full correct witness, echoing answers where it has them.
class ScriptedParitySolver : public SolverStrategy<BitVec> {
  public:
    explicit ScriptedParitySolver(std::size_t queries) : queries_(queries) {}
    bool deterministic() const override { return true; }

    std::optional<SolverOutput<BitVec>> propose(const PreimageInstance<BitVec>& instance,
                                                const std::vector<Round<BitVec>>& history) override {
        if (history.size() < planned(instance)) return std::nullopt;
        Witnesses<BitVec> wit;
        wit.w.reserve(instance.m);
        for (std::size_t i = 0; i < instance.m; ++i) {
            auto echoed = detail::last_answer_for(history, i);
            wit.w.push_back(echoed ? *echoed : par(instance.targets[i]));
        }
        return SolverOutput<BitVec>(std::move(wit));
    }

    std::size_t next_query(const PreimageInstance<BitVec>& instance,
                           const std::vector<Round<BitVec>>& history) override {
        return history.size() % instance.m;
    }

  private:
    std::size_t planned(const PreimageInstance<BitVec>& instance) const {
        return std::min(queries_, instance.m);
    }
    std::size_t queries_;
};

// Like parity_decider but with the randomness supplied explicitly, so
// small cases can be enumerated exactly.
inline ParityOutcome parity_decider_with(const BitVec& input, const ParityConfig& cfg,
                                         SolverStrategy<BitVec>& solver,
                                  const std::vector<BitVec>& u, std::size_t r) {
    const std::size_t m = cfg.m;
    const std::size_t a = cfg.effective_rows();
    if (m < 1) throw std::domain_error("parity_decider: m must be >= 1");
    if (input.size() != m) throw std::domain_error("parity_decider: input length mismatch");
    if (u.size() != a || r >= a) throw std::domain_error("parity_decider: blinding shape mismatch");

    const BitMatrix y = blind(input, u, r);
    PreimageInstance<BitVec> instance;
    instance.m = a;
    instance.targets = y.row_vector();
    instance.checker = [&y, m](const BitVec& x, std::size_t i) {
        return x.size() == m && unpar(x) == y.row(i);
    };
    instance.context = "prefix-parity game, " + std::to_string(a) + " rows of length " + std::to_string(m);

    FunctionTeacher<BitVec> teacher(
        [&u, r](std::size_t i) -> std::optional<BitVec> {
            if (i == r) return std::nullopt;  // the hidden row: refuse and abort
            return u[i];
        },
        /*honest=*/true);

    Transcript<BitVec> t = run_game(instance, solver, teacher, cfg.k);
    ParityOutcome out;
    if (t.final_kind == FinalKind::witnesses) {
        const auto& wit = std::get<Witnesses<BitVec>>(*t.final_output);
        // recovered is the parity vector of the input, so its last bit is
        // the input's total parity.
        const BitVec recovered = recover_parity(u[r], wit.w[r]);
        out.result = ParityDecision{static_cast<int>(recovered.get(m - 1))};
    } else {
        // No usable witness; aborts and budget exhaustion both end here.
        out.result = ParityAbort{};
    }
    out.transcript = std::move(t);
    return out;
}

// Blind the input, play the game against the refusing teacher, unmask.
// Draw order: rows U_0..U_{A-1}, then the hidden row index.
inline ParityOutcome parity_decider(const BitVec& input, const ParityConfig& cfg,
                                    SolverStrategy<BitVec>& solver,
                             RandomStream& rng) {
    const std::size_t a = cfg.effective_rows();
    std::vector<BitVec> u;
    u.reserve(a);
    for (std::size_t i = 0; i < a; ++i) u.push_back(random_bitvec(rng, cfg.m));
    const std::size_t r = static_cast<std::size_t>(rng.below_u64(a));
    return parity_decider_with(input, cfg, solver, u, r);
}

// ---------------------------------------------------------------------------
// Rabin factoring
// ---------------------------------------------------------------------------

struct FactoringConfig {
    unsigned prime_bits = 16;
    std::size_t k = 5;
    std::size_t m = 0;  // sequence length; 0 means the bit length of n

    std::size_t effective_m(const RabinModulus& modulus) const { return m == 0 ? modulus.bits() : m; }
};

// Cheating square-root solver: holds the factorization, echoes whatever it
// queried, and fills every other slot with the smallest root of the target.
// The fixed choice is what the extraction step relies on: it is made with
// no knowledge of which root the teacher is holding.
class CheatingRootSolver : public SolverStrategy<Nat> {
  public:
    CheatingRootSolver(RabinModulus secret, std::size_t queries)
        : secret_(std::move(secret)), queries_(queries) {}
    bool deterministic() const override { return true; }
    bool cheating() const override { return true; }

    std::optional<SolverOutput<Nat>> propose(const PreimageInstance<Nat>& instance,
                                             const std::vector<Round<Nat>>& history) override {
        if (history.size() < std::min(queries_, instance.m)) return std::nullopt;
        Witnesses<Nat> wit;
        wit.w.reserve(instance.m);
        for (std::size_t i = 0; i < instance.m; ++i) {
            auto echoed = detail::last_answer_for(history, i);
            wit.w.push_back(echoed ? *echoed : four_roots(instance.targets[i], secret_).min_root());
        }
        return SolverOutput<Nat>(std::move(wit));
    }

    std::size_t next_query(const PreimageInstance<Nat>& instance,
                           const std::vector<Round<Nat>>& history) override {
        return history.size() % instance.m;
    }

  private:
    RabinModulus secret_;  // sealed; never surfaces in transcripts
    std::size_t queries_;
};

// Square-root game with the sampled values supplied explicitly.
inline FactorOutcome factoring_attack_with(const RabinModulus& modulus, const FactoringConfig& cfg,
                                           SolverStrategy<Nat>& solver, const std::vector<Nat>& xs) {
    const Nat& n = modulus.n;
    const std::size_t m = xs.size();
    FactorOutcome out;

    // A sampled value sharing a factor with n already finishes the job.
    for (const Nat& x : xs) {
        const Nat g = gcd(x, n);
        if (g > 1) {
            out.result = Factor{g};
            return out;
        }
    }

    std::vector<Nat> targets;
    targets.reserve(m);
    for (const Nat& x : xs) targets.push_back((x * x) % n);

    PreimageInstance<Nat> instance;
    instance.m = m;
    instance.targets = targets;
    instance.checker = [n, targets](const Nat& w, std::size_t i) {
        return w >= 0 && w < n && (w * w) % n == targets[i];
    };
    instance.hash = [n](const Nat& u) { return (u * u) % n; };
    instance.context = "square roots modulo n=" + n.str();

    FunctionTeacher<Nat> teacher([&xs](std::size_t i) -> std::optional<Nat> { return xs[i]; },
                                 /*honest=*/true);

    Transcript<Nat> t = run_game(instance, solver, teacher, cfg.k);

    if (t.final_kind == FinalKind::witnesses) {
        const auto& wit = std::get<Witnesses<Nat>>(*t.final_output);
        std::set<std::size_t> queried;
        for (const auto& r : t.rounds) queried.insert(r.index);

        std::optional<Nat> first;
        for (std::size_t i = 0; i < m; ++i) {
            if (queried.count(i)) continue;
            ++out.unused_indices;
            if (auto g = factor_from_roots(xs[i], wit.w[i], n)) {
                ++out.unused_factor_hits;
                if (!first) first = g;
            }
        }
        out.result = first ? decltype(out.result)(Factor{*first}) : decltype(out.result)(FactorFail{});
    } else if (t.final_kind == FinalKind::collision) {
        // Two verified roots of one square; worth a gcd attempt.
        const auto& col = std::get<Collision<Nat>>(*t.final_output);
        auto g = factor_from_roots(col.u1, col.u2, n);
        out.result = g ? decltype(out.result)(Factor{*g}) : decltype(out.result)(FactorFail{});
    } else {
        out.result = FactorFail{};
    }
    out.transcript = std::move(t);
    return out;
}

// Sample x_0..x_{m-1} uniform in (0, n), square them into targets, play
// the game answering query i with x_i, then scan the indices the solver
// never asked about for a root disagreement.
inline FactorOutcome factoring_attack(const RabinModulus& modulus, const FactoringConfig& cfg,
                                      SolverStrategy<Nat>& solver, RandomStream& rng) {
    const std::size_t m = cfg.effective_m(modulus);
    std::vector<Nat> xs;
    xs.reserve(m);
    for (std::size_t i = 0; i < m; ++i) xs.push_back(rng.below(modulus.n - 1) + 1);
    return factoring_attack_with(modulus, cfg, solver, xs);
}

// ---------------------------------------------------------------------------
// Collision extraction
// ---------------------------------------------------------------------------

struct WphpConfig {
    Nat n = 1024;         // codomain bound
    std::size_t k = 2;    // query budget
    std::size_t seq_len = 0;  // 0 means the bit length of n
    std::function<Nat(const Nat&)> hash;  // map from [0, n^seq_len) to [0, n)

    std::size_t effective_seq_len() const { return seq_len == 0 ? bit_length(n) : seq_len; }
    Nat domain() const { return pow_nat(n, static_cast<unsigned>(effective_seq_len())); }

    // The stock instance: reduction mod n, whose canonical preimage of z is
    // z itself.
    static WphpConfig mod_hash(Nat n, std::size_t k, std::size_t seq_len = 0) {
        WphpConfig cfg;
        cfg.hash = [n](const Nat& u) { return u % n; };
        cfg.n = std::move(n);
        cfg.k = k;
        cfg.seq_len = seq_len;
        return cfg;
    }
};

// Deterministic preimage solver: queries its planned indices, echoes the
// answers, and fills the rest with a fixed canonical preimage of each
// target. It never learns which preimage the teacher sampled.
class CanonicalPreimageSolver : public SolverStrategy<Nat> {
  public:
    CanonicalPreimageSolver(std::size_t queries, std::function<Nat(const Nat&)> canonical_preimage)
        : queries_(queries), canonical_(std::move(canonical_preimage)) {}
    bool deterministic() const override { return true; }

    std::optional<SolverOutput<Nat>> propose(const PreimageInstance<Nat>& instance,
                                             const std::vector<Round<Nat>>& history) override {
        if (history.size() < std::min(queries_, instance.m)) return std::nullopt;
        Witnesses<Nat> wit;
        wit.w.reserve(instance.m);
        for (std::size_t i = 0; i < instance.m; ++i) {
            auto echoed = detail::last_answer_for(history, i);
            wit.w.push_back(echoed ? *echoed : canonical_(instance.targets[i]));
        }
        return SolverOutput<Nat>(std::move(wit));
    }

    std::size_t next_query(const PreimageInstance<Nat>& instance,
                           const std::vector<Round<Nat>>& history) override {
        return history.size() % instance.m;
    }

  private:
    std::size_t queries_;
    std::function<Nat(const Nat&)> canonical_;
};

// Proposes the same witness sequence no matter what it is shown.
class ConstantSolver : public SolverStrategy<Nat> {
  public:
    explicit ConstantSolver(Nat value = 0) : value_(std::move(value)) {}
    bool deterministic() const override { return true; }

    std::optional<SolverOutput<Nat>> propose(const PreimageInstance<Nat>& instance,
                                             const std::vector<Round<Nat>>&) override {
        Witnesses<Nat> wit;
        wit.w.assign(instance.m, value_);
        return SolverOutput<Nat>(std::move(wit));
    }

    std::size_t next_query(const PreimageInstance<Nat>& instance,
                           const std::vector<Round<Nat>>& history) override {
        return history.size() % instance.m;
    }

  private:
    Nat value_;
};

namespace detail {

template <class V>
PreimageInstance<Nat> wphp_instance(const WphpConfig& cfg, const std::vector<V>& targets) {
    if (!cfg.hash) throw std::domain_error("wphp: config carries no hash function");
    PreimageInstance<Nat> instance;
    instance.m = targets.size();
    instance.targets = targets;
    const Nat domain = cfg.domain();
    instance.checker = [hash = cfg.hash, targets, domain](const Nat& u, std::size_t i) {
        return u >= 0 && u < domain && hash(u) == targets[i];
    };
    instance.hash = cfg.hash;
    instance.context = "hash preimages below n=" + cfg.n.str();
    return instance;
}

}  // namespace detail

// Collision extraction with the sampled sequence supplied explicitly.
inline WphpOutcome wphp_attack_with(const WphpConfig& cfg, SolverStrategy<Nat>& solver,
                                    const std::vector<Nat>& xs) {
    if (!solver.deterministic()) {
        throw std::domain_error("wphp_attack: the counting argument needs a deterministic solver");
    }
    std::vector<Nat> targets;
    targets.reserve(xs.size());
    for (const Nat& x : xs) targets.push_back(cfg.hash(x));

    PreimageInstance<Nat> instance = detail::wphp_instance(cfg, targets);
    FunctionTeacher<Nat> teacher([&xs](std::size_t i) -> std::optional<Nat> { return xs[i]; },
                                 /*honest=*/true);

    Transcript<Nat> t = run_game(instance, solver, teacher, cfg.k);
    WphpOutcome out;

    if (t.final_kind == FinalKind::collision) {
        auto col = std::get<Collision<Nat>>(*t.final_output);
        if (col.u1 == col.u2 || cfg.hash(col.u1) != cfg.hash(col.u2)) {
            throw HarnessInvariantViolation("accepted collision fails re-verification");
        }
        out.result = std::move(col);
    } else if (t.final_kind == FinalKind::witnesses) {
        const auto& wit = std::get<Witnesses<Nat>>(*t.final_output);
        out.result = CollisionFail{};
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (wit.w[i] != xs[i] && cfg.hash(wit.w[i]) == cfg.hash(xs[i])) {
                out.result = Collision<Nat>{xs[i], wit.w[i]};
                break;
            }
        }
    } else {
        out.result = CollisionFail{};
    }
    out.transcript = std::move(t);
    return out;
}

// Sample the hidden sequence, hash it into targets, play the game, and
// compare the witness against the hidden values position by position.
inline WphpOutcome wphp_attack(const WphpConfig& cfg, SolverStrategy<Nat>& solver, RandomStream& rng) {
    const std::size_t len = cfg.effective_seq_len();
    const Nat domain = cfg.domain();
    std::vector<Nat> xs;
    xs.reserve(len);
    for (std::size_t i = 0; i < len; ++i) xs.push_back(rng.below(domain));
    return wphp_attack_with(cfg, solver, xs);
}

// Exhaustively drive a deterministic solver over every (target tuple,
// answer tuple) input, run each input twice to catch hidden state, and
// count the distinct witness sequences it can emit. The count can never
// exceed  n^(seq_len * (k+1)),  the number of inputs.
inline std::uint64_t output_count_audit(const WphpConfig& cfg, SolverStrategy<Nat>& solver,
                                        std::uint64_t enumeration_cap = 1u << 20) {
    if (!solver.deterministic()) {
        throw std::domain_error("output_count_audit: solver must be deterministic");
    }
    const std::size_t len = cfg.effective_seq_len();
    const Nat domain = cfg.domain();
    const Nat input_space = pow_nat(cfg.n, static_cast<unsigned>(len)) * pow_nat(domain, static_cast<unsigned>(cfg.k));
    if (input_space > enumeration_cap) {
        throw std::domain_error("output_count_audit: input space has " + input_space.str() +
                                " points, above the enumeration cap of " + std::to_string(enumeration_cap));
    }
    const std::uint64_t z_count = static_cast<std::uint64_t>(pow_nat(cfg.n, static_cast<unsigned>(len)));
    const std::uint64_t a_count = static_cast<std::uint64_t>(pow_nat(domain, static_cast<unsigned>(cfg.k)));
    const std::uint64_t n_small = static_cast<std::uint64_t>(cfg.n);
    const std::uint64_t domain_small = static_cast<std::uint64_t>(domain);

    auto run_once = [&](const std::vector<Nat>& targets,
                        const std::vector<Nat>& script) -> std::optional<std::vector<Nat>> {
        PreimageInstance<Nat> instance = detail::wphp_instance(cfg, targets);
        ScriptedTeacher<Nat> teacher(script);
        Transcript<Nat> t = run_game(instance, solver, teacher, cfg.k);
        if (t.final_kind != FinalKind::witnesses) return std::nullopt;
        return std::get<Witnesses<Nat>>(*t.final_output).w;
    };

    std::set<std::vector<Nat>> outputs;
    for (std::uint64_t zi = 0; zi < z_count; ++zi) {
        std::vector<Nat> targets(len);
        std::uint64_t rem = zi;
        for (std::size_t p = 0; p < len; ++p) {
            targets[p] = Nat(rem % n_small);
            rem /= n_small;
        }
        for (std::uint64_t ai = 0; ai < a_count; ++ai) {
            std::vector<Nat> script(cfg.k);
            std::uint64_t arem = ai;
            for (std::size_t p = 0; p < cfg.k; ++p) {
                script[p] = Nat(arem % domain_small);
                arem /= domain_small;
            }
            auto first = run_once(targets, script);
            auto second = run_once(targets, script);
            if (first != second) {
                throw HarnessInvariantViolation(
                    "output_count_audit: solver produced different outputs on identical inputs");
            }
            if (first) outputs.insert(std::move(*first));
        }
    }

    const std::uint64_t count = outputs.size();
    if (Nat(count) > input_space) {
        throw std::logic_error("output_count_audit: output count exceeds the input-space bound");
    }
    return count;
}

}  // namespace witnesskit
