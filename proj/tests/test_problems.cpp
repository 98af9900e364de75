#include <doctest.h>

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ramq/problems.hpp"
#include "ramq/rng.hpp"

using namespace ramq;

namespace {

choice_stream sweep_stream() { return choice_stream(nword(1, {}, {0}), {sweep_token{}}); }

choice_stream pause_stream() { return choice_stream(nword(1, {}, {0}), {pause_token{}}); }

// Enumerates 3 at every odd stage and otherwise pauses.
choice_stream three_stream() {
    return choice_stream(nword(2, {}, {0, 1}), {pause_token{}, enum_token{3}});
}

// Enumerates the initial segment {0, 1, 2} and then pauses forever.
choice_stream segment_stream() {
    return choice_stream(nword(4, {0, 1, 2}, {3}),
                         {enum_token{0}, enum_token{1}, enum_token{2}, pause_token{}});
}

// A machine with one output stream that copies its input token each stage.
stage_machine copy_tokens() {
    return stage_machine(1, [] {
        return stage_machine::program(
            [](std::int64_t, std::int64_t token, const std::vector<std::int64_t>&) {
                stage_machine::step_result r;
                r.emissions = {{token}};
                return r;
            });
    });
}

token_source word_source(nword w) {
    return [w = std::move(w)](std::int64_t stage) { return std::int64_t{w.at(stage)}; };
}

token_source stream_source(choice_stream s) {
    return [s = std::move(s)](std::int64_t stage) { return s.token_code(stage); };
}

}  // namespace

TEST_CASE("choice streams validate their token table") {
    CHECK_THROWS_AS(choice_stream(nword(2, {}, {0, 1}), {pause_token{}}), bad_entry);
    CHECK_THROWS_AS(choice_stream(nword(1, {}, {0}), {enum_token{-1}}), bad_entry);
    CHECK_NOTHROW(choice_stream(nword(1, {}, {0}), {enum_token{0}}));
}

TEST_CASE("choice streams compute their range exactly") {
    CHECK(sweep_stream().full_range());
    CHECK_FALSE(three_stream().full_range());
    CHECK(three_stream().finite_range() == std::set<std::int64_t>{3});
    CHECK(segment_stream().finite_range() == std::set<std::int64_t>{0, 1, 2});

    // A sweep enumerates the least number missing at its stage: the first
    // sweep yields 0, the enumeration of 0 in between adds nothing, and the
    // second sweep yields 1.
    choice_stream s(nword(3, {0, 1, 0}, {2}),
                    {sweep_token{}, enum_token{0}, pause_token{}});
    CHECK_FALSE(s.full_range());
    CHECK(s.finite_range() == std::set<std::int64_t>{0, 1});

    // Sweeps confined to the prefix keep the range finite.
    choice_stream t(nword(2, {1}, {0}), {enum_token{5}, sweep_token{}});
    CHECK_FALSE(t.full_range());
    CHECK(t.finite_range() == std::set<std::int64_t>{0, 5});
}

TEST_CASE("choice streams expose their stage tokens as codes") {
    auto s = three_stream();
    CHECK(s.token_code(0) == code_pause);
    CHECK(s.token_code(1) == 3);
    CHECK(sweep_stream().token_code(7) == code_sweep);
    CHECK(decode_token(code_pause) == stream_token{pause_token{}});
    CHECK(decode_token(code_sweep) == stream_token{sweep_token{}});
    CHECK(decode_token(3) == stream_token{enum_token{3}});
    CHECK_THROWS_AS(decode_token(-3), bad_entry);
}

TEST_CASE("answer sets test membership against values and tail") {
    answer_set a;
    a.values = {2, 5};
    a.canonical = 2;
    CHECK(a.valid(2));
    CHECK(a.valid(5));
    CHECK_FALSE(a.valid(3));
    CHECK_FALSE(a.valid(100));

    answer_set odd_tail;
    odd_tail.tail = 1;
    odd_tail.stride = 2;
    odd_tail.canonical = 1;
    CHECK(odd_tail.valid(1));
    CHECK(odd_tail.valid(7));
    CHECK_FALSE(odd_tail.valid(0));
    CHECK_FALSE(odd_tail.valid(4));
}

TEST_CASE("limit of a binary sequence is decided from the presentation") {
    auto zero = oracle_solve(lpo_instance{nword(2, {}, {0})});
    CHECK(zero.values == std::set<std::int64_t>{0});
    CHECK(zero.canonical == 0);
    CHECK_FALSE(zero.valid(1));

    CHECK(oracle_solve(lpo_instance{nword(2, {0, 1}, {0})}).canonical == 1);
    CHECK(oracle_solve(lpo_instance{nword(2, {}, {0, 1})}).canonical == 1);
    CHECK(oracle_solve(lpo_instance{nword(2, {0, 0}, {0})}).canonical == 0);

    // Finitely many ones exactly when the cycle is all-zero.
    CHECK(oracle_solve(isfinite_instance{nword(2, {1, 1}, {0})}).canonical == 1);
    CHECK(oracle_solve(isfinite_instance{nword(2, {}, {1})}).canonical == 0);
    CHECK(oracle_solve(isfinite_instance{nword(2, {1}, {0, 1})}).canonical == 0);

    CHECK_THROWS_AS(oracle_solve(lpo_instance{nword(3, {}, {0})}), bad_entry);
}

TEST_CASE("closed choice rejects enumerations that cover everything") {
    CHECK_THROWS_AS(oracle_solve(cn_instance{sweep_stream()}), domain_violation);

    auto a = oracle_solve(cn_instance{three_stream()});
    CHECK(a.values == std::set<std::int64_t>{0, 1, 2});
    CHECK(a.tail == 4);
    CHECK(a.stride == 1);
    CHECK(a.canonical == 0);
    CHECK(a.valid(2));
    CHECK_FALSE(a.valid(3));
    CHECK(a.valid(4));
    CHECK(a.valid(1000));
}

TEST_CASE("total choice answers anything on a covering enumeration") {
    auto full = oracle_solve(tcn_instance{sweep_stream()});
    CHECK(full.tail == 0);
    CHECK(full.stride == 1);
    CHECK(full.canonical == 0);
    CHECK(full.valid(0));
    CHECK(full.valid(12345));

    auto seg = oracle_solve(tcn_instance{segment_stream()});
    CHECK(seg.values.empty());
    CHECK(seg.tail == 3);
    CHECK(seg.canonical == 3);
    CHECK_FALSE(seg.valid(1));
}

TEST_CASE("eventual palette bound is the last non-recurring position") {
    auto a = oracle_solve(ect_instance{nword(2, {0, 1, 0, 1}, {0})});
    CHECK(a.tail == 3);
    CHECK(a.canonical == 3);
    CHECK_FALSE(a.valid(2));
    CHECK(a.valid(3));
    CHECK(a.valid(50));

    CHECK(oracle_solve(ect_instance{nword(2, {}, {0, 1})}).canonical == 0);
}

TEST_CASE("recurring colour problems answer exactly the cycle letters") {
    auto a = oracle_solve(crt_instance{nword(3, {2}, {0, 1})});
    CHECK(a.values == std::set<std::int64_t>{0, 1});
    CHECK(a.canonical == 0);
    CHECK_FALSE(a.valid(2));

    CHECK(oracle_solve(crt_plus_instance{nword(3, {2}, {0, 1})}).values ==
          std::set<std::int64_t>{0, 1});
    CHECK(oracle_solve(crt_n_instance{nword(4, {3, 3}, {2})}).values ==
          std::set<std::int64_t>{2});
    CHECK(oracle_solve(crt_n_instance{nword(4, {3, 3}, {2})}).canonical == 2);
}

TEST_CASE("segment bounding accepts exactly the upper bounds") {
    auto a = oracle_solve(bound_instance{segment_stream()});
    CHECK(a.tail == 2);
    CHECK(a.canonical == 2);
    CHECK_FALSE(a.valid(1));
    CHECK(a.valid(2));
    CHECK(a.valid(7));

    // Empty segment: every number bounds it.
    auto empty = oracle_solve(bound_instance{pause_stream()});
    CHECK(empty.tail == 0);
    CHECK(empty.canonical == 0);

    // The enumerated set must be an initial segment.
    choice_stream gap(nword(3, {0, 1}, {2}),
                      {enum_token{0}, enum_token{2}, pause_token{}});
    CHECK_THROWS_AS(oracle_solve(bound_instance{gap}), domain_violation);
    CHECK_THROWS_AS(oracle_solve(bound_instance{sweep_stream()}), domain_violation);
}

TEST_CASE("answer sets survive the direct simulation recheck") {
    cross_check_answers(lpo_instance{nword(2, {0, 1}, {0})});
    cross_check_answers(isfinite_instance{nword(2, {1, 1}, {0})});
    cross_check_answers(cn_instance{three_stream()});
    cross_check_answers(tcn_instance{sweep_stream()});
    cross_check_answers(ect_instance{nword(2, {0, 1, 0, 1}, {0})});
    cross_check_answers(crt_instance{nword(3, {2}, {0, 1})});
    cross_check_answers(bound_instance{segment_stream()});

    splitmix64 rng(0xbadc0de);
    for (int trial = 0; trial < 60; ++trial) {
        int alphabet = rng.range(2, 4);
        std::vector<colour> prefix, cycle;
        int plen = rng.range(0, 4);
        int clen = rng.range(1, 3);
        for (int i = 0; i < plen; ++i) prefix.push_back(rng.range(0, alphabet - 1));
        for (int i = 0; i < clen; ++i) cycle.push_back(rng.range(0, alphabet - 1));
        nword w(alphabet, prefix, cycle);
        cross_check_answers(ect_instance{w});
        cross_check_answers(crt_instance{w});
        if (alphabet == 2) {
            cross_check_answers(lpo_instance{w});
            cross_check_answers(isfinite_instance{w});
        }
    }
}

TEST_CASE("parallel tuples solve componentwise and allow the empty tuple") {
    CHECK(solve_parallel({}).empty());

    std::vector<problem_instance> parts = {isfinite_instance{nword(2, {}, {1})},
                                           tcn_instance{pause_stream()}};
    auto answers = solve_parallel(parts);
    REQUIRE(answers.size() == 2);
    CHECK(answers[0].canonical == 0);
    CHECK(answers[1].canonical == 0);
    CHECK(answers[1].valid(41));
}

TEST_CASE("coproducts dispatch on the tag") {
    std::vector<problem_instance> family = {lpo_instance{nword(2, {}, {0})},
                                            isfinite_instance{nword(2, {}, {1})}};
    CHECK(solve_coproduct(1, family).canonical == 0);
    CHECK(solve_coproduct(0, family).canonical == 0);
    CHECK(solve_coproduct(0, family).values == std::set<std::int64_t>{0});
    CHECK_THROWS_AS(solve_coproduct(2, family), domain_violation);

    // The colour problem with its colour count as tag is a coproduct: the
    // tagged component and the tagged union solve identically.
    nword w(3, {2}, {0, 1});
    CHECK(oracle_solve(crt_plus_instance{w}).values ==
          oracle_solve(crt_instance{w}).values);
}

TEST_CASE("machines run for exactly the requested horizon") {
    auto m = copy_tokens();
    auto t = run_machine(m, word_source(nword(2, {0, 1}, {1})), 4);
    REQUIRE(t.stages.size() == 4);
    CHECK(t.outputs == 1);
    CHECK(t.stages[0].emissions == std::vector<std::vector<std::int64_t>>{{0}});
    CHECK(t.stages[1].emissions == std::vector<std::vector<std::int64_t>>{{1}});
    CHECK(t.stages[3].stage == 3);
    CHECK(t.emitted(0) == std::vector<std::int64_t>{0, 1, 1, 1});
    CHECK_FALSE(t.final_commitment().has_value());
    CHECK(t.mindchanges() == 0);

    CHECK_THROWS_AS(run_machine(m, word_source(nword(2, {}, {0})), 0), domain_violation);
}

TEST_CASE("machine runs replay identically") {
    auto m = copy_tokens();
    auto src = word_source(nword(2, {1, 0}, {0, 1}));
    CHECK(run_machine(m, src, 9) == run_machine(m, src, 9));
}

TEST_CASE("commitments persist and flips are recorded as mind changes") {
    // Commits 0 at stage 0 and 1 from stage 3 on.
    stage_machine m(1, [] {
        return stage_machine::program(
            [](std::int64_t stage, std::int64_t, const std::vector<std::int64_t>&) {
                stage_machine::step_result r;
                r.emissions = {{}};
                if (stage == 0) r.commitment = 0;
                if (stage == 3) r.commitment = 1;
                return r;
            });
    });
    auto t = run_machine(m, word_source(nword(2, {}, {0})), 6);
    CHECK(t.stages[0].commitment == 0);
    CHECK(t.stages[2].commitment == 0);  // carried forward
    CHECK(t.stages[3].commitment == 1);
    CHECK(t.stages[3].mindchange);
    CHECK_FALSE(t.stages[0].mindchange);
    CHECK(t.stages[5].commitment == 1);
    CHECK(t.mindchanges() == 1);
    CHECK(t.final_commitment() == 1);
}

TEST_CASE("a machine emitting the wrong number of streams faults") {
    stage_machine broken(2, [] {
        return stage_machine::program(
            [](std::int64_t, std::int64_t, const std::vector<std::int64_t>&) {
                stage_machine::step_result r;
                r.emissions = {{0}};
                return r;
            });
    });
    CHECK_THROWS_AS(run_machine(broken, word_source(nword(2, {}, {0})), 1), machine_fault);
}

TEST_CASE("consistent certificates pass the trace check") {
    nword w(2, {1, 1}, {0});
    auto t = run_machine(copy_tokens(), word_source(w), 10);
    certificate cert;
    cert.instances.push_back({isfinite_instance{w}, 1, 2});
    CHECK_NOTHROW(check_consistency(t, cert, 10));
    CHECK_NOTHROW(check_consistency(t, cert, 3));

    CHECK_THROWS_AS(check_consistency(t, cert, 0), domain_violation);
    CHECK_THROWS_AS(check_consistency(t, cert, 11), domain_violation);
}

TEST_CASE("emissions that leave the certified expansion are flagged") {
    nword w(2, {1, 1}, {0});
    // Copies the word but injects a spurious one at stage 5.
    stage_machine tampered(1, [w] {
        return stage_machine::program(
            [w](std::int64_t stage, std::int64_t, const std::vector<std::int64_t>&) {
                stage_machine::step_result r;
                r.emissions = {{stage == 5 ? 1 : std::int64_t{w.at(stage)}}};
                return r;
            });
    });
    auto t = run_machine(tampered, word_source(w), 10);
    certificate cert;
    cert.instances.push_back({isfinite_instance{w}, 1, 2});
    CHECK_THROWS_AS(check_consistency(t, cert, 10), inconsistent);
    // Below the tampered stage the prefix still agrees.
    CHECK_NOTHROW(check_consistency(t, cert, 5));
}

TEST_CASE("certificates claiming a premature stabilisation are flagged") {
    nword w(2, {0, 0, 0, 1}, {0});
    auto t = run_machine(copy_tokens(), word_source(w), 10);
    certificate honest;
    honest.instances.push_back({isfinite_instance{w}, 1, 4});
    CHECK_NOTHROW(check_consistency(t, honest, 10));

    certificate early;
    early.instances.push_back({isfinite_instance{w}, 1, 2});
    CHECK_THROWS_AS(check_consistency(t, early, 10), inconsistent);
}

TEST_CASE("certificates with an invalid limit answer are flagged") {
    nword w(2, {}, {1});
    auto t = run_machine(copy_tokens(), word_source(w), 5);
    certificate cert;
    cert.instances.push_back({isfinite_instance{w}, 1, 0});
    CHECK_THROWS_AS(check_consistency(t, cert, 5), inconsistent);
}

TEST_CASE("enumeration certificates watch the range after stabilisation") {
    auto s = three_stream();
    auto t = run_machine(copy_tokens(), stream_source(s), 8);

    // 3 is first enumerated at stage 1, so the range is complete from 2 on.
    certificate cert;
    cert.instances.push_back({tcn_instance{s}, 0, 2});
    CHECK_NOTHROW(check_consistency(t, cert, 8));

    certificate early;
    early.instances.push_back({tcn_instance{s}, 0, 1});
    CHECK_THROWS_AS(check_consistency(t, early, 8), inconsistent);

    // A covering enumeration never stabilises and is exempt from the check.
    auto sw = sweep_stream();
    auto ts = run_machine(copy_tokens(), stream_source(sw), 6);
    certificate full;
    full.instances.push_back({tcn_instance{sw}, 7, 0});
    CHECK_NOTHROW(check_consistency(ts, full, 6));
}

TEST_CASE("certificate shape must match the trace") {
    auto t = run_machine(copy_tokens(), word_source(nword(2, {}, {0})), 3);
    certificate cert;  // no instances for the single output stream
    CHECK_THROWS_AS(check_consistency(t, cert, 3), inconsistent);
}

TEST_CASE("parallelising a stable computation changes nothing") {
    mindchange_solver p;
    p.tentative = [](std::int64_t) { return std::int64_t{4}; };
    p.budget = 0;
    p.horizon = 6;
    parallel_builder b;
    b.finite_streams = [](std::int64_t v) {
        return std::vector<nword>{nword(2, {}, {colour(v % 2)})};
    };
    auto run = compose_to_parallel(1, 0, p, b);
    CHECK(run.answer == 4);
    CHECK(run.mindchanges == 0);
    REQUIRE(run.finite_parts.size() == 1);
    CHECK_FALSE(run.palette_part.has_value());
    CHECK(run.decode() == std::vector<std::int64_t>{1, 4});
}

TEST_CASE("discarded prefixes are concatenated into the parallel instances") {
    // Tentative answer 0 for three stages, then 3 for good: one mind change.
    mindchange_solver p;
    p.tentative = [](std::int64_t stage) { return std::int64_t{stage < 3 ? 0 : 3}; };
    p.budget = 1;
    p.horizon = 8;

    parallel_builder b;
    b.finite_streams = [](std::int64_t v) {
        return std::vector<nword>{nword(2, {}, {colour(v % 2)})};
    };
    b.palette_stream = [](std::int64_t v) { return nword(2, {}, {colour(v % 2)}); };

    auto run = compose_to_parallel(1, 2, p, b);
    CHECK(run.answer == 3);
    CHECK(run.mindchanges == 1);

    // The retracted segment contributes the junk prefix 0,0,0.
    REQUIRE(run.finite_parts.size() == 1);
    const auto& junked = std::get<isfinite_instance>(run.finite_parts[0]);
    CHECK(junked.bits.at(0) == 0);
    CHECK(junked.bits.at(2) == 0);
    CHECK(junked.bits.at(3) == 1);
    CHECK(junked.bits.recurring() == colour_set{1});

    // Junk does not move the limit bit, and the palette bound stays valid
    // for the clean stream.
    auto decoded = run.decode();
    REQUIRE(decoded.size() == 3);
    CHECK(decoded[0] == 0);
    CHECK(decoded[1] == 2);
    CHECK(decoded[2] == 3);
    CHECK(oracle_solve(isfinite_instance{nword(2, {}, {1})}).valid(decoded[0]));
    CHECK(oracle_solve(ect_instance{nword(2, {}, {1})}).valid(decoded[1]));

    REQUIRE(run.palette_part.has_value());
    CHECK(oracle_solve(std::get<ect_instance>(*run.palette_part)).canonical == 2);
}

TEST_CASE("the mind change budget is enforced") {
    mindchange_solver p;
    p.tentative = [](std::int64_t stage) { return stage % 2; };
    p.budget = 2;
    p.horizon = 5;
    parallel_builder b;
    CHECK_THROWS_AS(compose_to_parallel(0, 0, p, b), mindchange_budget_exceeded);

    p.budget = 4;
    auto run = compose_to_parallel(0, 0, p, b);
    CHECK(run.answer == 0);
    CHECK(run.mindchanges == 4);
    CHECK(run.decode() == std::vector<std::int64_t>{0});
}

TEST_CASE("parallelisation agrees with the sequential composition") {
    splitmix64 rng(0x5eed5);
    for (int trial = 0; trial < 30; ++trial) {
        std::int64_t settled = rng.range(0, 5);
        std::int64_t flip = rng.range(1, 6);
        std::int64_t guess = rng.range(0, 5);
        mindchange_solver p;
        p.tentative = [=](std::int64_t stage) { return stage < flip ? guess : settled; };
        p.budget = 1;
        p.horizon = flip + rng.range(1, 4);

        parallel_builder b;
        b.finite_streams = [](std::int64_t v) {
            return std::vector<nword>{nword(2, {}, {colour(v % 2)}),
                                      nword(2, {colour(v % 2)}, {0})};
        };
        b.palette_stream = [](std::int64_t v) {
            return nword(3, {}, {colour(v % 3), 2});
        };

        auto run = compose_to_parallel(2, 3, p, b);
        CHECK(run.answer == settled);

        // Sequential run: hand the final answer to the builder directly.
        auto clean_bits = b.finite_streams(settled);
        auto decoded = run.decode();
        REQUIRE(decoded.size() == 4);
        CHECK(decoded[0] == oracle_solve(isfinite_instance{clean_bits[0]}).canonical);
        CHECK(decoded[1] == oracle_solve(isfinite_instance{clean_bits[1]}).canonical);
        CHECK(oracle_solve(ect_instance{b.palette_stream(settled)}).valid(decoded[2]));
        CHECK(decoded[3] == settled);
    }
}

TEST_CASE("colour chains split a word into parity searches") {
    // Only colour 0 recurs: evens are all enumerated, odd survivors decode
    // back to colour 0.
    auto only_zero = crt_chain(nword(2, {}, {0}));
    REQUIRE(only_zero.levels.size() == 1);
    CHECK(only_zero.levels[0].split == nword(2, {}, {0}));
    CHECK(only_zero.levels[0].survivors.tail == 1);
    CHECK(only_zero.levels[0].survivors.stride == 2);
    CHECK(only_zero.levels[0].survivors.canonical == 1);
    CHECK(only_zero.decode({1}) == 0);
    CHECK(only_zero.decode({17}) == 0);

    auto only_one = crt_chain(nword(2, {}, {1}));
    CHECK(only_one.levels[0].survivors.tail == 0);
    CHECK(only_one.levels[0].survivors.stride == 2);
    CHECK(only_one.decode({0}) == 1);

    // Two ones in the prefix shift the surviving odds past 2*2.
    auto shifted = crt_chain(nword(2, {1, 1}, {0}));
    CHECK(shifted.levels[0].survivors.tail == 5);
    CHECK(shifted.levels[0].survivors.canonical == 5);
    CHECK(shifted.decode({5}) == 0);

    // Both colours recur: the enumeration covers everything and either
    // parity decodes to a recurring colour.
    auto both = crt_chain(nword(2, {}, {0, 1}));
    CHECK(both.levels[0].survivors.tail == 0);
    CHECK(both.levels[0].survivors.stride == 1);
    CHECK(both.decode({0}) == 1);
    CHECK(both.decode({1}) == 0);

    CHECK_THROWS_AS(crt_chain(nword(1, {}, {0})), domain_violation);
    CHECK_THROWS_AS(both.decode({0, 0}), domain_violation);
}

TEST_CASE("deeper colour chains pad the rest word with last-seen values") {
    nword w(3, {2}, {0, 1});
    auto chain = crt_chain(w);
    REQUIRE(chain.levels.size() == 2);

    // Level one keeps colour 0 and folds the rest to 1; both recur.
    CHECK(chain.levels[0].split == nword(3, {2}, {0, 1}).relabel(2, {0, 1, 1}));
    CHECK(chain.levels[0].survivors.stride == 1);
    CHECK(chain.levels[0].survivors.canonical == 0);

    // The rest word starts 1,1 (the sporadic colour 2 and its padding echo)
    // and then settles on 0 forever.
    const nword& rest = chain.levels[1].split;
    CHECK(rest.alphabet() == 2);
    CHECK(rest.at(0) == 1);
    CHECK(rest.at(1) == 1);
    CHECK(rest.at(2) == 0);
    CHECK(rest.at(3) == 0);
    CHECK(rest.at(5) == 0);
    CHECK(rest.recurring() == colour_set{0});
    CHECK(chain.levels[1].survivors.tail == 5);
    CHECK(chain.levels[1].survivors.stride == 2);

    // Even then odd: descend one level and answer colour 1.
    CHECK(chain.decode({0, 5}) == 1);
}

TEST_CASE("colour chains decode a recurring colour on random words") {
    splitmix64 rng(0xc4a1);
    for (int trial = 0; trial < 40; ++trial) {
        int k = rng.range(1, 3);
        int alphabet = k + 1;
        std::vector<colour> prefix, cycle;
        int plen = rng.range(0, 4);
        int clen = rng.range(1, 4);
        for (int i = 0; i < plen; ++i) prefix.push_back(rng.range(0, alphabet - 1));
        for (int i = 0; i < clen; ++i) cycle.push_back(rng.range(0, alphabet - 1));
        nword w(alphabet, prefix, cycle);

        auto chain = crt_chain(w);
        REQUIRE(int(chain.levels.size()) == k);
        std::vector<std::int64_t> canonical, skewed;
        for (const auto& level : chain.levels) {
            canonical.push_back(level.survivors.canonical);
            // A non-canonical valid answer must decode just as soundly.
            skewed.push_back(level.survivors.canonical +
                             2 * level.survivors.stride);
            CHECK(level.survivors.valid(skewed.back()));
        }
        CHECK(w.recurring().count(int(chain.decode(canonical))) == 1);
        CHECK(w.recurring().count(int(chain.decode(skewed))) == 1);
    }
}

TEST_CASE("problem instances serialise to tagged json") {
    problem_instance lpo = lpo_instance{nword(2, {}, {0})};
    CHECK(problem_instance_to_json(lpo) ==
          R"({"kind":"lpo","word":{"alphabet":2,"cycle":[0],"prefix":[]}})");

    problem_instance tc = tcn_instance{sweep_stream()};
    CHECK(problem_instance_to_json(tc) ==
          R"({"kind":"tcn","schedule":{"alphabet":1,"cycle":[0],"prefix":[]},)"
          R"("tokens":[{"kind":"sweep"}]})");

    std::vector<problem_instance> all = {
        lpo_instance{nword(2, {1}, {0})},
        isfinite_instance{nword(2, {}, {1})},
        cn_instance{three_stream()},
        tcn_instance{segment_stream()},
        ect_instance{nword(3, {0, 1}, {2})},
        crt_instance{nword(3, {2}, {0, 1})},
        crt_plus_instance{nword(2, {}, {0})},
        crt_n_instance{nword(4, {3, 3}, {2})},
        bound_instance{segment_stream()},
    };
    for (const auto& inst : all) {
        auto back = problem_instance_from_json(problem_instance_to_json(inst));
        CHECK(problem_instance_to_json(back) == problem_instance_to_json(inst));
    }

    CHECK_THROWS_AS(problem_instance_from_json("not json"), parse_error);
    CHECK_THROWS_AS(problem_instance_from_json(R"({"kind":"mystery"})"), parse_error);
    CHECK_THROWS_AS(problem_instance_from_json(
                        R"({"kind":"tcn","schedule":{"alphabet":1,"cycle":[0],)"
                        R"("prefix":[]},"tokens":[{"kind":"jump"}]})"),
                    parse_error);
}

TEST_CASE("traces serialise to one json record per stage") {
    auto t = run_machine(copy_tokens(), word_source(nword(2, {0, 1}, {1})), 3);
    CHECK(trace_to_json_lines(t) ==
          "{\"emissions\":[[0]],\"stage\":0}\n"
          "{\"emissions\":[[1]],\"stage\":1}\n"
          "{\"emissions\":[[1]],\"stage\":2}\n");
    CHECK(trace_from_json_lines(trace_to_json_lines(t)) == t);

    stage_machine committing(1, [] {
        return stage_machine::program(
            [](std::int64_t stage, std::int64_t, const std::vector<std::int64_t>&) {
                stage_machine::step_result r;
                r.emissions = {{}};
                r.commitment = stage == 0 ? 2 : 5;
                return r;
            });
    });
    auto tc = run_machine(committing, word_source(nword(2, {}, {0})), 2);
    CHECK(trace_to_json_lines(tc) ==
          "{\"commitment\":2,\"emissions\":[[]],\"stage\":0}\n"
          "{\"commitment\":5,\"emissions\":[[]],\"mindchange\":true,\"stage\":1}\n");
    CHECK(trace_from_json_lines(trace_to_json_lines(tc)) == tc);

    CHECK_THROWS_AS(trace_from_json_lines("{\"stage\":0}\n"), parse_error);
    CHECK_THROWS_AS(trace_from_json_lines("nope\n"), parse_error);
}
