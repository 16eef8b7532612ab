#include "witnesskit/protocol.hpp"

#include "witnesskit/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <optional>
#include <vector>

using namespace witnesskit;

namespace {

PreimageInstance<Nat> squaring_instance(Nat n, std::vector<Nat> targets) {
    PreimageInstance<Nat> inst;
    inst.m = targets.size();
    inst.targets = targets;
    inst.checker = [n, targets](const Nat& w, std::size_t i) {
        return w < n && (w * w) % n == targets[i];
    };
    inst.hash = [n](const Nat& u) { return (u * u) % n; };
    return inst;
}

PreimageInstance<Nat> identity_instance(std::vector<Nat> targets) {
    PreimageInstance<Nat> inst;
    inst.m = targets.size();
    inst.targets = targets;
    inst.checker = [targets](const Nat& w, std::size_t i) { return w == targets[i]; };
    return inst;
}

// Proposes one fixed output, first thing.
class ImmediateSolver : public SolverStrategy<Nat> {
  public:
    ImmediateSolver(SolverOutput<Nat> output, bool deterministic = true)
        : output_(std::move(output)), deterministic_(deterministic) {}
    bool deterministic() const override { return deterministic_; }
    std::optional<SolverOutput<Nat>> propose(const PreimageInstance<Nat>&,
                                             const std::vector<Round<Nat>>&) override {
        return output_;
    }
    std::size_t next_query(const PreimageInstance<Nat>& inst,
                           const std::vector<Round<Nat>>& history) override {
        return history.size() % inst.m;
    }

  private:
    SolverOutput<Nat> output_;
    bool deterministic_;
};

// Works through a fixed query plan, then echoes answers into a witness,
// defaulting unqueried slots to the target itself.
class PlannedSolver : public SolverStrategy<Nat> {
  public:
    explicit PlannedSolver(std::vector<std::size_t> plan, bool deterministic = true)
        : plan_(std::move(plan)), deterministic_(deterministic) {}
    bool deterministic() const override { return deterministic_; }

    std::optional<SolverOutput<Nat>> propose(const PreimageInstance<Nat>& inst,
                                             const std::vector<Round<Nat>>& history) override {
        if (history.size() < plan_.size()) return std::nullopt;
        Witnesses<Nat> wit;
        for (std::size_t i = 0; i < inst.m; ++i) {
            std::optional<Nat> echoed;
            for (const auto& r : history) {
                if (r.index == i && r.answer) echoed = r.answer;
            }
            wit.w.push_back(echoed ? *echoed : inst.targets[i]);
        }
        return SolverOutput<Nat>(std::move(wit));
    }

    std::size_t next_query(const PreimageInstance<Nat>& inst,
                           const std::vector<Round<Nat>>& history) override {
        if (history.size() < plan_.size()) return plan_[history.size()];
        return history.size() % inst.m;
    }

  private:
    std::vector<std::size_t> plan_;
    bool deterministic_;
};

}  // namespace

TEST_CASE("verify_witness checks every slot") {
    const auto inst = squaring_instance(21, {4, 4});
    REQUIRE(verify_witness(inst, {2, 19}));   // 2*2 = 4 and 19*19 = 361 = 4 mod 21
    REQUIRE_FALSE(verify_witness(inst, {3, 2}));  // 3*3 = 9
    REQUIRE_THROWS_AS(verify_witness(inst, {2}), std::domain_error);

    const auto ident = identity_instance({7});
    REQUIRE(verify_witness(ident, {7}));
}

TEST_CASE("a correct first proposal needs no budget") {
    auto inst = identity_instance({5, 6});
    ImmediateSolver solver(Witnesses<Nat>{{5, 6}});
    FunctionTeacher<Nat> teacher([](std::size_t) { return std::optional<Nat>(0); }, false);
    const auto t = run_game(inst, solver, teacher, 0);
    REQUIRE(t.final_kind == FinalKind::witnesses);
    REQUIRE(t.queries_used == 0);
    REQUIRE(t.rounds.empty());
    REQUIRE(t.accepted());
}

TEST_CASE("query then answer inside the budget") {
    auto inst = identity_instance({5});
    PlannedSolver solver({0});
    FunctionTeacher<Nat> teacher([&](std::size_t i) { return std::optional<Nat>(inst.targets[i]); },
                                 true);
    const auto t = run_game(inst, solver, teacher, 1);
    REQUIRE(t.final_kind == FinalKind::witnesses);
    REQUIRE(t.queries_used == 1);
    REQUIRE(t.distinct_indices == 1);

    PlannedSolver again({0});
    const auto t0 = run_game(inst, again, teacher, 0);
    REQUIRE(t0.final_kind == FinalKind::budget_exceeded);
    REQUIRE(t0.queries_used == 0);
}

TEST_CASE("teacher abort ends the game and is recorded") {
    auto inst = identity_instance({5, 6});
    PlannedSolver solver({1});
    FunctionTeacher<Nat> teacher([](std::size_t) -> std::optional<Nat> { return std::nullopt; }, true);
    const auto t = run_game(inst, solver, teacher, 3);
    REQUIRE(t.final_kind == FinalKind::aborted);
    REQUIRE(t.rounds.size() == 1);
    REQUIRE_FALSE(t.rounds[0].answer.has_value());

    const auto j = transcript_to_json(t);
    REQUIRE(j["rounds"][0]["answer"] == "abort");
    REQUIRE(j["final"]["kind"] == "aborted");
    REQUIRE(j.contains("budget"));
    REQUIRE(j.contains("queries_used"));
    REQUIRE(j.contains("distinct_indices"));
}

TEST_CASE("out-of-range query is a protocol violation") {
    auto inst = identity_instance({5, 6});
    PlannedSolver solver({5});
    FunctionTeacher<Nat> teacher([](std::size_t) { return std::optional<Nat>(0); }, false);
    REQUIRE_THROWS_AS(run_game(inst, solver, teacher, 3), ProtocolViolation);
}

TEST_CASE("an honest-flagged teacher may not lie") {
    auto inst = identity_instance({5});
    PlannedSolver solver({0});
    FunctionTeacher<Nat> liar([](std::size_t) { return std::optional<Nat>(99); }, true);
    REQUIRE_THROWS_AS(run_game(inst, solver, liar, 2), HarnessInvariantViolation);

    // The same lie from a dishonest teacher just plays out badly.
    FunctionTeacher<Nat> adversary([](std::size_t) { return std::optional<Nat>(99); }, false);
    PlannedSolver solver2({0});
    const auto t = run_game(inst, solver2, adversary, 1);
    REQUIRE(t.final_kind == FinalKind::budget_exceeded);
}

TEST_CASE("collision outputs are verified before acceptance") {
    auto inst = squaring_instance(21, {4});
    ImmediateSolver good(Collision<Nat>{2, 19});  // both square to 4
    FunctionTeacher<Nat> teacher([](std::size_t) { return std::optional<Nat>(2); }, true);
    const auto t = run_game(inst, good, teacher, 0);
    REQUIRE(t.final_kind == FinalKind::collision);

    ImmediateSolver equal_pair(Collision<Nat>{2, 2});
    const auto t2 = run_game(inst, equal_pair, teacher, 0);
    REQUIRE(t2.final_kind == FinalKind::budget_exceeded);  // rejected, forced to query

    ImmediateSolver mismatched(Collision<Nat>{2, 3});
    const auto t3 = run_game(inst, mismatched, teacher, 0);
    REQUIRE(t3.final_kind == FinalKind::budget_exceeded);

    // Without a forward-map value the claim cannot be verified at all.
    auto bare = identity_instance({4});
    ImmediateSolver unverifiable(Collision<Nat>{2, 19});
    const auto t4 = run_game(bare, unverifiable, teacher, 0);
    REQUIRE(t4.final_kind == FinalKind::budget_exceeded);
}

TEST_CASE("no-preimage claims accept only under exhaustive verification") {
    PreimageInstance<Nat> inst;
    inst.m = 2;
    inst.targets = {3, 1};
    // Candidates below 3; target 3 has no preimage under identity-below-3.
    inst.checker = [&](const Nat& w, std::size_t i) { return w < 3 && w == inst.targets[i]; };
    inst.no_preimage_verifier = [&](std::size_t i) -> std::optional<bool> {
        for (Nat u = 0; u < 3; ++u) {
            if (inst.checker(u, i)) return false;
        }
        return true;
    };
    FunctionTeacher<Nat> teacher([](std::size_t) { return std::optional<Nat>(1); }, false);

    ImmediateSolver honest_claim(NoPreimageClaim{0});
    const auto t = run_game(inst, honest_claim, teacher, 0);
    REQUIRE(t.final_kind == FinalKind::no_preimage);

    ImmediateSolver false_claim(NoPreimageClaim{1});
    const auto t2 = run_game(inst, false_claim, teacher, 0);
    REQUIRE(t2.final_kind == FinalKind::budget_exceeded);

    inst.no_preimage_verifier = nullptr;
    ImmediateSolver unverified_claim(NoPreimageClaim{0});
    const auto t3 = run_game(inst, unverified_claim, teacher, 0);
    REQUIRE(t3.final_kind == FinalKind::no_preimage_unverified);
    REQUIRE_FALSE(t3.accepted());

    ImmediateSolver bad_index(NoPreimageClaim{9});
    REQUIRE_THROWS_AS(run_game(inst, bad_index, teacher, 0), ProtocolViolation);
}

TEST_CASE("budget is a hard ceiling across random plans") {
    RandomStream rng(63);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t m = 1 + rng.below_u64(4);
        std::vector<Nat> targets;
        for (std::size_t i = 0; i < m; ++i) targets.push_back(rng.below(Nat(50)));
        auto inst = identity_instance(targets);

        const std::size_t plan_len = rng.below_u64(5);
        std::vector<std::size_t> plan;
        for (std::size_t i = 0; i < plan_len; ++i) plan.push_back(rng.below_u64(m));
        PlannedSolver solver(plan);
        FunctionTeacher<Nat> teacher(
            [&](std::size_t i) { return std::optional<Nat>(inst.targets[i]); }, true);

        const std::size_t budget = rng.below_u64(4);
        const auto t = run_game(inst, solver, teacher, budget);
        REQUIRE(t.queries_used <= budget);
        REQUIRE(t.distinct_indices <= t.queries_used);
        if (plan_len <= budget) {
            // Sound solver with answered queries: always a verified witness.
            REQUIRE(t.final_kind == FinalKind::witnesses);
            REQUIRE(t.queries_used == plan_len);
        } else {
            REQUIRE(t.final_kind == FinalKind::budget_exceeded);
        }
    }
}

TEST_CASE("replay reproduces deterministic runs and flags tampering") {
    RandomStream rng(1234);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t m = 1 + rng.below_u64(4);
        std::vector<Nat> targets;
        for (std::size_t i = 0; i < m; ++i) targets.push_back(rng.below(Nat(30)));
        auto inst = identity_instance(targets);

        std::vector<std::size_t> plan;
        const std::size_t plan_len = rng.below_u64(4);
        for (std::size_t i = 0; i < plan_len; ++i) plan.push_back(rng.below_u64(m));
        PlannedSolver solver(plan);
        FunctionTeacher<Nat> teacher(
            [&](std::size_t i) { return std::optional<Nat>(inst.targets[i]); }, true);
        const std::size_t budget = rng.below_u64(5);
        const auto t = run_game(inst, solver, teacher, budget);

        PlannedSolver fresh(plan);
        REQUIRE(replay(t, fresh, inst));

        // Tampering with the last answer changes the echoed witness, so a
        // witness-final transcript must stop replaying. (Perturbing an
        // answer that a later re-query overrides is legitimately invisible.)
        if (t.final_kind == FinalKind::witnesses && !t.rounds.empty()) {
            auto tampered = t;
            tampered.rounds.back().answer = *tampered.rounds.back().answer + 1;
            PlannedSolver fresh2(plan);
            REQUIRE_FALSE(replay(tampered, fresh2, inst));
        }
    }
}

TEST_CASE("replay of a zero-round acceptance") {
    auto inst = identity_instance({5});
    ImmediateSolver solver(Witnesses<Nat>{{5}});
    FunctionTeacher<Nat> teacher([](std::size_t) { return std::optional<Nat>(0); }, false);
    const auto t = run_game(inst, solver, teacher, 0);
    ImmediateSolver fresh(Witnesses<Nat>{{5}});
    REQUIRE(replay(t, fresh, inst));

    ImmediateSolver undeclared(Witnesses<Nat>{{5}}, /*deterministic=*/false);
    REQUIRE_THROWS_AS(replay(t, undeclared, inst), std::domain_error);
}
