#pragma once

#include "witnesskit/bitvec.hpp"
#include "witnesskit/nat.hpp"

#include <json.hpp>

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace witnesskit {

// The budgeted preimage game. A solver must produce preimages of every
// target under a forward map it can evaluate but not invert; it may buy at
// most `budget` answers from the teacher, one index at a time. The harness
// owns verification: nothing a solver or teacher claims is trusted.

struct ProtocolViolation : std::logic_error {
    using std::logic_error::logic_error;
};

// An honest-flagged teacher handed back an answer the checker rejects.
// That is a bug in the surrounding harness or test, never a game outcome.
struct HarnessInvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

template <class V>
struct PreimageInstance {
    std::size_t m = 0;                                      // number of targets
    std::vector<V> targets;                                 // y_0 .. y_{m-1}
    std::function<bool(const V&, std::size_t)> checker;     // candidate w is a preimage of target i
    std::function<Nat(const V&)> hash;                      // forward map as a value, for collision checks
    std::function<std::optional<bool>(std::size_t)> no_preimage_verifier;  // exhaustive check, if feasible
    std::string context;                                    // public parameters, for transcripts
};

template <class V>
struct Witnesses {
    std::vector<V> w;
    bool operator==(const Witnesses&) const = default;
};

template <class V>
struct Collision {
    V u1;
    V u2;
    bool operator==(const Collision&) const = default;
};

struct NoPreimageClaim {
    std::size_t index = 0;
    bool operator==(const NoPreimageClaim&) const = default;
};

template <class V>
using SolverOutput = std::variant<Witnesses<V>, Collision<V>, NoPreimageClaim>;

template <class V>
struct Round {
    std::size_t index = 0;
    std::optional<V> answer;  // empty means the teacher aborted here
    bool operator==(const Round&) const = default;
};

enum class FinalKind {
    witnesses,
    collision,
    no_preimage,
    no_preimage_unverified,
    aborted,
    budget_exceeded,
};

inline const char* to_label(FinalKind k) {
    switch (k) {
        case FinalKind::witnesses: return "witnesses";
        case FinalKind::collision: return "collision";
        case FinalKind::no_preimage: return "no_preimage";
        case FinalKind::no_preimage_unverified: return "no_preimage_unverified";
        case FinalKind::aborted: return "aborted";
        case FinalKind::budget_exceeded: return "budget_exceeded";
    }
    return "?";
}

template <class V>
struct Transcript {
    std::size_t budget = 0;
    std::vector<Round<V>> rounds;
    FinalKind final_kind = FinalKind::aborted;
    std::optional<SolverOutput<V>> final_output;  // present for accepted outputs
    std::size_t queries_used = 0;
    std::size_t distinct_indices = 0;

    bool accepted() const {
        return final_kind == FinalKind::witnesses || final_kind == FinalKind::collision ||
               final_kind == FinalKind::no_preimage;
    }
};

// A solver is the pair of maps the witnessing shape dictates: given the
// public instance and the answers received so far, an optional output to
// try, and the index to query when that output is rejected (or skipped).
// A solver flagged deterministic must implement both as pure functions of
// (instance, history); that is what makes transcripts replayable.
template <class V>
class SolverStrategy {
  public:
    virtual ~SolverStrategy() = default;
    virtual bool deterministic() const { return false; }
    virtual bool cheating() const { return false; }
    virtual std::optional<SolverOutput<V>> propose(const PreimageInstance<V>& instance,
                                                   const std::vector<Round<V>>& history) = 0;
    virtual std::size_t next_query(const PreimageInstance<V>& instance,
                                   const std::vector<Round<V>>& history) = 0;
};

template <class V>
class TeacherStrategy {
  public:
    virtual ~TeacherStrategy() = default;
    virtual bool honest() const { return true; }
    virtual std::optional<V> answer(std::size_t index) = 0;  // empty = abort
};

// Teacher defined by a lookup function; aborts where the function declines.
template <class V>
class FunctionTeacher : public TeacherStrategy<V> {
  public:
    FunctionTeacher(std::function<std::optional<V>(std::size_t)> fn, bool honest)
        : fn_(std::move(fn)), honest_(honest) {}
    bool honest() const override { return honest_; }
    std::optional<V> answer(std::size_t index) override { return fn_(index); }

  private:
    std::function<std::optional<V>(std::size_t)> fn_;
    bool honest_;
};

// Teacher that replies with a fixed script in call order, ignoring the
// queried index. Used to enumerate a machine's answer inputs; dishonest.
template <class V>
class ScriptedTeacher : public TeacherStrategy<V> {
  public:
    explicit ScriptedTeacher(std::vector<V> script) : script_(std::move(script)) {}
    bool honest() const override { return false; }
    std::optional<V> answer(std::size_t) override {
        if (cursor_ >= script_.size()) return std::nullopt;
        return script_[cursor_++];
    }

  private:
    std::vector<V> script_;
    std::size_t cursor_ = 0;
};

template <class V>
bool verify_witness(const PreimageInstance<V>& instance, const std::vector<V>& w) {
    if (w.size() != instance.m) throw std::domain_error("verify_witness: length mismatch");
    for (std::size_t j = 0; j < instance.m; ++j) {
        if (!instance.checker(w[j], j)) return false;
    }
    return true;
}

namespace detail {

// nullopt: rejected. FinalKind: how to record an accepted output.
template <class V>
std::optional<FinalKind> judge_output(const PreimageInstance<V>& instance, const SolverOutput<V>& out) {
    if (const auto* wit = std::get_if<Witnesses<V>>(&out)) {
        if (wit->w.size() != instance.m) {
            throw ProtocolViolation("solver proposed a witness sequence of wrong length");
        }
        if (verify_witness(instance, wit->w)) return FinalKind::witnesses;
        return std::nullopt;
    }
    if (const auto* col = std::get_if<Collision<V>>(&out)) {
        if (!instance.hash) return std::nullopt;  // no forward map value, cannot verify
        if (col->u1 == col->u2) return std::nullopt;
        if (instance.hash(col->u1) == instance.hash(col->u2)) return FinalKind::collision;
        return std::nullopt;
    }
    const auto& claim = std::get<NoPreimageClaim>(out);
    if (claim.index >= instance.m) throw ProtocolViolation("no-preimage claim with out-of-range index");
    if (instance.no_preimage_verifier) {
        if (auto verdict = instance.no_preimage_verifier(claim.index)) {
            if (*verdict) return FinalKind::no_preimage;
            return std::nullopt;  // a preimage exists; claim rejected
        }
    }
    return FinalKind::no_preimage_unverified;
}

template <class V>
std::size_t count_distinct_indices(const std::vector<Round<V>>& rounds) {
    std::set<std::size_t> seen;
    for (const auto& r : rounds) seen.insert(r.index);
    return seen.size();
}

}  // namespace detail

// One complete game. The loop alternates a proposal with a query: an
// accepted proposal finalizes the transcript, a rejected one forces the
// solver's next query, and a query past the budget finalizes the game as
// lost. Answers from an honest teacher are checked on receipt.
template <class V>
Transcript<V> run_game(const PreimageInstance<V>& instance, SolverStrategy<V>& solver,
                       TeacherStrategy<V>& teacher, std::size_t budget) {
    if (instance.m < 1) throw std::domain_error("run_game: instance needs at least one target");
    Transcript<V> t;
    t.budget = budget;
    std::vector<Round<V>> answered;

    auto finalize = [&](FinalKind kind, std::optional<SolverOutput<V>> output) {
        t.final_kind = kind;
        t.final_output = std::move(output);
        t.queries_used = t.rounds.size();
        t.distinct_indices = detail::count_distinct_indices(t.rounds);
        return t;
    };

    for (;;) {
        if (auto proposal = solver.propose(instance, answered)) {
            if (auto kind = detail::judge_output(instance, *proposal)) {
                return finalize(*kind, std::move(*proposal));
            }
        }
        const std::size_t index = solver.next_query(instance, answered);
        if (index >= instance.m) throw ProtocolViolation("query index out of range");
        if (t.rounds.size() >= budget) {
            return finalize(FinalKind::budget_exceeded, std::nullopt);
        }
        std::optional<V> answer = teacher.answer(index);
        if (!answer) {
            t.rounds.push_back(Round<V>{index, std::nullopt});
            return finalize(FinalKind::aborted, std::nullopt);
        }
        if (teacher.honest() && !instance.checker(*answer, index)) {
            throw HarnessInvariantViolation("honest teacher produced an answer the checker rejects");
        }
        t.rounds.push_back(Round<V>{index, answer});
        answered.push_back(Round<V>{index, std::move(answer)});
    }
}

// Re-drives a deterministic solver against the recorded answers and checks
// that every query and the final output come out identical.
template <class V>
bool replay(const Transcript<V>& transcript, SolverStrategy<V>& solver,
            const PreimageInstance<V>& instance) {
    if (!solver.deterministic()) throw std::domain_error("replay: solver is not flagged deterministic");
    std::vector<Round<V>> answered;
    std::size_t cursor = 0;

    for (;;) {
        if (auto proposal = solver.propose(instance, answered)) {
            if (auto kind = detail::judge_output(instance, *proposal)) {
                return cursor == transcript.rounds.size() && transcript.final_kind == *kind &&
                       transcript.final_output && *transcript.final_output == *proposal;
            }
        }
        const std::size_t index = solver.next_query(instance, answered);
        if (index >= instance.m) return false;
        if (cursor == transcript.rounds.size()) {
            // The recorded game stopped here; only a budget cut explains it.
            return transcript.final_kind == FinalKind::budget_exceeded &&
                   transcript.rounds.size() == transcript.budget;
        }
        const Round<V>& recorded = transcript.rounds[cursor];
        if (recorded.index != index) return false;
        ++cursor;
        if (!recorded.answer) {
            return transcript.final_kind == FinalKind::aborted && cursor == transcript.rounds.size();
        }
        answered.push_back(recorded);
    }
}

template <class V>
nlohmann::json output_to_json(const SolverOutput<V>& out) {
    nlohmann::json j;
    if (const auto* wit = std::get_if<Witnesses<V>>(&out)) {
        j["kind"] = "witnesses";
        auto arr = nlohmann::json::array();
        for (const auto& v : wit->w) arr.push_back(text_of(v));
        j["witnesses"] = arr;
    } else if (const auto* col = std::get_if<Collision<V>>(&out)) {
        j["kind"] = "collision";
        j["u1"] = text_of(col->u1);
        j["u2"] = text_of(col->u2);
    } else {
        j["kind"] = "no_preimage";
        j["index"] = std::get<NoPreimageClaim>(out).index;
    }
    return j;
}

template <class V>
nlohmann::json transcript_to_json(const Transcript<V>& t) {
    nlohmann::json j;
    j["budget"] = t.budget;
    auto rounds = nlohmann::json::array();
    for (const auto& r : t.rounds) {
        nlohmann::json jr;
        jr["index"] = r.index;
        jr["answer"] = r.answer ? text_of(*r.answer) : std::string("abort");
        rounds.push_back(jr);
    }
    j["rounds"] = rounds;
    if (t.final_output) {
        j["final"] = output_to_json(*t.final_output);
        j["final"]["kind"] = to_label(t.final_kind);  // distinguishes unverified no-preimage
    } else {
        j["final"] = nlohmann::json{{"kind", to_label(t.final_kind)}};
    }
    j["queries_used"] = t.queries_used;
    j["distinct_indices"] = t.distinct_indices;
    return j;
}

}  // namespace witnesskit
