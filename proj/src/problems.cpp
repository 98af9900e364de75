#include "ramq/problems.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include <json.hpp>

#include "ramq/qcolouring.hpp"

namespace ramq {

namespace {

using i64 = std::int64_t;
using njson = nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

i64 mex(const std::set<i64>& s) {
    i64 n = 0;
    while (s.count(n)) ++n;
    return n;
}

void require_bits(const nword& w) {
    if (w.alphabet() != 2)
        throw bad_entry("binary sequence needs alphabet 2, got " +
                        std::to_string(w.alphabet()));
}

// Complement of a finite enumerated set, as explicit values below the tail.
answer_set complement_answers(const std::set<i64>& range) {
    answer_set a;
    a.tail = range.empty() ? 0 : *range.rbegin() + 1;
    for (i64 n = 0; n < *a.tail; ++n)
        if (!range.count(n)) a.values.insert(n);
    a.canonical = a.values.empty() ? *a.tail : *a.values.begin();
    return a;
}

answer_set recurring_answers(const nword& w) {
    answer_set a;
    for (colour c : w.recurring()) a.values.insert(c);
    a.canonical = *a.values.begin();
    return a;
}

}  // namespace

std::int64_t encode_token(const stream_token& t) {
    return std::visit(overloaded{[](const pause_token&) { return code_pause; },
                                 [](const sweep_token&) { return code_sweep; },
                                 [](const enum_token& e) { return e.value; }},
                      t);
}

stream_token decode_token(std::int64_t code) {
    if (code == code_pause) return pause_token{};
    if (code == code_sweep) return sweep_token{};
    if (code < 0) throw bad_entry("unknown token code " + std::to_string(code));
    return enum_token{code};
}

choice_stream::choice_stream(nword schedule, std::vector<stream_token> tokens)
    : schedule_(std::move(schedule)), tokens_(std::move(tokens)) {
    if (int(tokens_.size()) != schedule_.alphabet())
        throw bad_entry("schedule over " + std::to_string(schedule_.alphabet()) +
                        " letters needs as many tokens, got " +
                        std::to_string(tokens_.size()));
    for (const stream_token& t : tokens_)
        if (const auto* e = std::get_if<enum_token>(&t); e && e->value < 0)
            throw bad_entry("enumerated values must be non-negative");
}

stream_token choice_stream::token_at(std::int64_t stage) const {
    return tokens_[std::size_t(schedule_.at(stage))];
}

std::int64_t choice_stream::token_code(std::int64_t stage) const {
    return encode_token(token_at(stage));
}

bool choice_stream::full_range() const {
    for (colour c : schedule_.recurring())
        if (std::holds_alternative<sweep_token>(tokens_[std::size_t(c)])) return true;
    return false;
}

std::set<std::int64_t> choice_stream::range_before(std::int64_t stages) const {
    std::set<i64> out;
    for (i64 t = 0; t < stages; ++t) {
        std::visit(overloaded{[](const pause_token&) {},
                              [&](const enum_token& e) { out.insert(e.value); },
                              [&](const sweep_token&) { out.insert(mex(out)); }},
                   token_at(t));
    }
    return out;
}

std::set<std::int64_t> choice_stream::finite_range() const {
    if (full_range()) throw domain_violation("the enumeration covers everything");
    // Sweeps live in the prefix only, so simulating it settles their values;
    // the cycle then contributes a fixed set.
    std::set<i64> out = range_before(i64(schedule_.prefix().size()));
    for (colour c : schedule_.recurring())
        if (const auto* e = std::get_if<enum_token>(&tokens_[std::size_t(c)]))
            out.insert(e->value);
    return out;
}

bool answer_set::valid(std::int64_t a) const {
    if (values.count(a)) return true;
    return tail && a >= *tail && (a - *tail) % stride == 0;
}

answer_set oracle_solve(const problem_instance& inst) {
    return std::visit(
        overloaded{
            [](const lpo_instance& p) {
                require_bits(p.bits);
                answer_set a;
                a.canonical = p.bits.occurs(1) ? 1 : 0;
                a.values = {a.canonical};
                return a;
            },
            [](const isfinite_instance& p) {
                require_bits(p.bits);
                answer_set a;
                a.canonical = p.bits.recurring().count(1) ? 0 : 1;
                a.values = {a.canonical};
                return a;
            },
            [](const cn_instance& p) {
                if (p.stream.full_range())
                    throw domain_violation(
                        "closed choice needs a non-covering enumeration");
                return complement_answers(p.stream.finite_range());
            },
            [](const tcn_instance& p) {
                if (p.stream.full_range()) {
                    answer_set a;
                    a.tail = 0;
                    a.canonical = 0;
                    return a;
                }
                return complement_answers(p.stream.finite_range());
            },
            [](const ect_instance& p) {
                answer_set a;
                a.tail = p.word.ect_bound();
                a.canonical = *a.tail;
                return a;
            },
            [](const crt_instance& p) { return recurring_answers(p.word); },
            [](const crt_plus_instance& p) { return recurring_answers(p.word); },
            [](const crt_n_instance& p) { return recurring_answers(p.word); },
            [](const bound_instance& p) {
                if (p.stream.full_range())
                    throw domain_violation("the enumerated segment must be finite");
                std::set<i64> range = p.stream.finite_range();
                if (!range.empty() &&
                    (*range.begin() != 0 || *range.rbegin() != i64(range.size()) - 1))
                    throw domain_violation(
                        "the enumeration must cover an initial segment");
                answer_set a;
                a.tail = range.empty() ? 0 : *range.rbegin();
                a.canonical = *a.tail;
                return a;
            }},
        inst);
}

bool valid_answer(const problem_instance& inst, std::int64_t a) {
    return oracle_solve(inst).valid(a);
}

namespace {

void verify(bool ok, const std::string& what) {
    if (!ok) throw verification_failed(what);
}

// Scan-based recount of the limit facts an answer set relies on: letters in
// the cycle vector recur, everything else is confined to the prefix.
void cross_check_word(const nword& w, const answer_set& a, bool limit_bits,
                      bool finiteness) {
    i64 plen = i64(w.prefix().size());
    i64 clen = i64(w.cycle().size());
    if (limit_bits) {
        bool one = false;
        for (i64 t = 0; t < plen + clen; ++t) one = one || w.at(t) == 1;
        i64 bit = 0;
        if (finiteness) {
            // Finitely many ones exactly when two extra cycle passes add none.
            i64 first = 0, more = 0;
            for (i64 t = 0; t < plen + clen; ++t) first += w.at(t) == 1;
            for (i64 t = 0; t < plen + 3 * clen; ++t) more += w.at(t) == 1;
            bit = more == first ? 1 : 0;
        } else {
            bit = one ? 1 : 0;
        }
        verify(a.values == std::set<i64>{bit} && a.canonical == bit,
               "limit bit disagrees with the scanned presentation");
        return;
    }
    std::set<i64> cycle_letters;
    for (colour c : w.cycle()) cycle_letters.insert(c);
    if (a.tail) {
        // Palette bound: every later position must wear a cycle letter, and
        // the bound itself must be tight.
        i64 b = a.canonical;
        for (i64 x = b + 1; x <= plen + 2 * clen; ++x)
            verify(cycle_letters.count(w.at(x)) == 1,
                   "position " + std::to_string(x) + " breaks the bound " +
                       std::to_string(b));
        verify(b == 0 || cycle_letters.count(w.at(b)) == 0,
               "bound " + std::to_string(b) + " is not tight");
        verify(!a.valid(b - 1) && a.valid(b + 7), "bound tail shape is off");
    } else {
        // Recurring colours: exactly the cycle letters.
        verify(a.values == cycle_letters && a.canonical == *cycle_letters.begin(),
               "recurring colours disagree with the cycle letters");
    }
}

void cross_check_stream(const choice_stream& s, const answer_set& a, bool bounding) {
    i64 window = i64(s.schedule().prefix().size()) + 2 * i64(s.schedule().cycle().size());
    std::set<i64> seen = s.range_before(window);
    if (!bounding && s.full_range()) {
        for (i64 n = 0; n < 20; ++n)
            verify(a.valid(n), "a covering enumeration leaves every answer valid");
        return;
    }
    i64 top = seen.empty() ? 0 : *seen.rbegin();
    for (i64 n = 0; n <= top + 3; ++n) {
        bool want = bounding ? n >= top || seen.empty() : !seen.count(n);
        verify(a.valid(n) == want,
               "membership of " + std::to_string(n) + " disagrees with the scan");
    }
}

}  // namespace

void cross_check_answers(const problem_instance& inst) {
    answer_set a = oracle_solve(inst);
    std::visit(overloaded{[&](const lpo_instance& p) { cross_check_word(p.bits, a, true, false); },
                          [&](const isfinite_instance& p) {
                              cross_check_word(p.bits, a, true, true);
                          },
                          [&](const cn_instance& p) { cross_check_stream(p.stream, a, false); },
                          [&](const tcn_instance& p) { cross_check_stream(p.stream, a, false); },
                          [&](const ect_instance& p) { cross_check_word(p.word, a, false, false); },
                          [&](const crt_instance& p) { cross_check_word(p.word, a, false, false); },
                          [&](const crt_plus_instance& p) {
                              cross_check_word(p.word, a, false, false);
                          },
                          [&](const crt_n_instance& p) {
                              cross_check_word(p.word, a, false, false);
                          },
                          [&](const bound_instance& p) {
                              cross_check_stream(p.stream, a, true);
                          }},
               inst);
}

std::vector<answer_set> solve_parallel(const std::vector<problem_instance>& parts) {
    std::vector<answer_set> out;
    out.reserve(parts.size());
    for (const problem_instance& p : parts) out.push_back(oracle_solve(p));
    return out;
}

answer_set solve_coproduct(std::size_t tag, const std::vector<problem_instance>& family) {
    if (tag >= family.size())
        throw domain_violation("tag " + std::to_string(tag) + " outside the family of " +
                               std::to_string(family.size()));
    return oracle_solve(family[tag]);
}

stage_machine::stage_machine(std::size_t outputs, std::function<program()> fresh)
    : outputs_(outputs), fresh_(std::move(fresh)) {
    if (!fresh_) throw bad_entry("a machine needs a program factory");
}

stage_machine::program stage_machine::start() const { return fresh_(); }

std::vector<std::int64_t> machine_trace::emitted(std::size_t output) const {
    if (output >= outputs)
        throw domain_violation("stream " + std::to_string(output) + " of " +
                               std::to_string(outputs));
    std::vector<i64> out;
    for (const stage_record& rec : stages)
        out.insert(out.end(), rec.emissions[output].begin(), rec.emissions[output].end());
    return out;
}

std::optional<std::int64_t> machine_trace::final_commitment() const {
    return stages.empty() ? std::nullopt : stages.back().commitment;
}

std::int64_t machine_trace::mindchanges() const {
    i64 n = 0;
    for (const stage_record& rec : stages) n += rec.mindchange;
    return n;
}

machine_trace run_machine(const stage_machine& m, const token_source& input,
                          std::int64_t horizon, const feedback_source& feedback) {
    if (horizon < 1) throw domain_violation("horizon must be at least 1");
    if (!input) throw bad_entry("a run needs an input source");
    stage_machine::program step = m.start();
    if (!step) throw machine_fault("the machine produced no program");

    machine_trace t;
    t.outputs = m.outputs();
    std::optional<i64> standing;
    for (i64 s = 0; s < horizon; ++s) {
        std::vector<i64> fb = feedback ? feedback(s) : std::vector<i64>{};
        stage_machine::step_result r = step(s, input(s), fb);
        if (r.emissions.size() != m.outputs())
            throw machine_fault("stage " + std::to_string(s) + " emitted " +
                                std::to_string(r.emissions.size()) +
                                " streams, the machine declares " +
                                std::to_string(m.outputs()));
        stage_record rec;
        rec.stage = s;
        rec.emissions = std::move(r.emissions);
        rec.mindchange =
            r.commitment && standing && *r.commitment != *standing;
        if (r.commitment) standing = r.commitment;
        rec.commitment = standing;
        t.stages.push_back(std::move(rec));
    }
    return t;
}

namespace {

bool enumeration_kind(const problem_instance& inst) {
    return std::holds_alternative<cn_instance>(inst) ||
           std::holds_alternative<tcn_instance>(inst) ||
           std::holds_alternative<bound_instance>(inst);
}

const choice_stream& instance_stream(const problem_instance& inst) {
    if (const auto* c = std::get_if<cn_instance>(&inst)) return c->stream;
    if (const auto* t = std::get_if<tcn_instance>(&inst)) return t->stream;
    return std::get<bound_instance>(inst).stream;
}

const nword& instance_word(const problem_instance& inst) {
    return std::visit(
        overloaded{[](const lpo_instance& p) -> const nword& { return p.bits; },
                   [](const isfinite_instance& p) -> const nword& { return p.bits; },
                   [](const cn_instance& p) -> const nword& { return p.stream.schedule(); },
                   [](const tcn_instance& p) -> const nword& { return p.stream.schedule(); },
                   [](const ect_instance& p) -> const nword& { return p.word; },
                   [](const crt_instance& p) -> const nword& { return p.word; },
                   [](const crt_plus_instance& p) -> const nword& { return p.word; },
                   [](const crt_n_instance& p) -> const nword& { return p.word; },
                   [](const bound_instance& p) -> const nword& {
                       return p.stream.schedule();
                   }},
        inst);
}

i64 expansion_code(const problem_instance& inst, i64 pos) {
    if (enumeration_kind(inst)) return instance_stream(inst).token_code(pos);
    return instance_word(inst).at(pos);
}

// Exact honesty of a certified stabilisation point: beyond it the expansion
// may not emit a one (settled limit bits), a non-recurring letter, or a new
// range element. One prefix tail plus one cycle pass decides this.
void check_stable_tail(const certified_instance& ci, std::size_t stream) {
    const nword& w = instance_word(ci.instance);
    i64 plen = i64(w.prefix().size());
    i64 clen = i64(w.cycle().size());
    i64 from = ci.stable_stage;
    i64 upto = std::max(from, plen) + clen;
    auto blame = [&](i64 pos, const std::string& what) {
        throw inconsistent("stream " + std::to_string(stream) + " position " +
                           std::to_string(pos) + ": " + what + " after the certified " +
                           "stabilisation point " + std::to_string(ci.stable_stage));
    };

    std::visit(
        overloaded{
            [&](const lpo_instance& p) {
                if (ci.answer == 1 && p.bits.first_occurrence(1) >= ci.stable_stage)
                    blame(p.bits.first_occurrence(1), "the witnessing one appears");
            },
            [&](const isfinite_instance& p) {
                if (ci.answer != 1) return;
                for (i64 t = from; t < upto; ++t)
                    if (p.bits.at(t) == 1) blame(t, "a one appears");
            },
            [&](const ect_instance& p) {
                for (i64 t = from; t < upto; ++t)
                    if (!p.word.recurring().count(p.word.at(t)))
                        blame(t, "a sporadic letter appears");
            },
            [&](const crt_instance& p) {
                for (i64 t = from; t < upto; ++t)
                    if (!p.word.recurring().count(p.word.at(t)))
                        blame(t, "a sporadic colour appears");
            },
            [&](const crt_plus_instance& p) {
                for (i64 t = from; t < upto; ++t)
                    if (!p.word.recurring().count(p.word.at(t)))
                        blame(t, "a sporadic colour appears");
            },
            [&](const crt_n_instance& p) {
                for (i64 t = from; t < upto; ++t)
                    if (!p.word.recurring().count(p.word.at(t)))
                        blame(t, "a sporadic colour appears");
            },
            [&](const auto& p) {
                // Enumerations: a covering one never settles and is exempt.
                if (std::holds_alternative<tcn_instance>(ci.instance) &&
                    p.stream.full_range())
                    return;
                std::set<i64> settled = p.stream.range_before(from);
                for (i64 t = from; t < upto; ++t) {
                    i64 code = p.stream.token_code(t);
                    if (code == code_sweep) blame(t, "a sweep runs");
                    if (code >= 0 && !settled.count(code))
                        blame(t, "the new element " + std::to_string(code) +
                                     " is enumerated");
                }
            }},
        ci.instance);
}

}  // namespace

void check_consistency(const machine_trace& t, const certificate& cert,
                       std::int64_t horizon) {
    if (horizon < 1 || horizon > i64(t.stages.size()))
        throw domain_violation("horizon " + std::to_string(horizon) +
                               " outside the recorded run of " +
                               std::to_string(t.stages.size()) + " stages");
    if (cert.instances.size() != t.outputs)
        throw inconsistent("certificate covers " + std::to_string(cert.instances.size()) +
                           " streams, the trace has " + std::to_string(t.outputs));

    for (std::size_t i = 0; i < cert.instances.size(); ++i) {
        const certified_instance& ci = cert.instances[i];
        if (ci.stable_stage < 0)
            throw inconsistent("stream " + std::to_string(i) +
                               ": negative stabilisation point");
        answer_set sol = oracle_solve(ci.instance);
        if (!sol.valid(ci.answer))
            throw inconsistent("stream " + std::to_string(i) + ": certified answer " +
                               std::to_string(ci.answer) + " is not valid");

        // Emissions must follow the certified expansion token for token.
        i64 pos = 0;
        for (i64 s = 0; s < horizon; ++s) {
            for (i64 got : t.stages[std::size_t(s)].emissions[i]) {
                i64 want = expansion_code(ci.instance, pos);
                if (got != want)
                    throw inconsistent("stream " + std::to_string(i) + " stage " +
                                       std::to_string(s) + ": expected " +
                                       std::to_string(want) + ", got " +
                                       std::to_string(got) + " at position " +
                                       std::to_string(pos));
                ++pos;
            }
        }

        check_stable_tail(ci, i);
    }
}

parallel_run compose_to_parallel(std::int64_t a, std::int64_t b,
                                 const mindchange_solver& p,
                                 const parallel_builder& builder) {
    if (a < 0 || b < 0) throw domain_violation("stream counts must be non-negative");
    if (p.horizon < 1) throw domain_violation("solver horizon must be at least 1");
    if (p.budget < 0) throw domain_violation("mind change budget must be non-negative");
    if (!p.tentative) throw bad_entry("the solver needs a tentative answer function");
    if (a > 0 && !builder.finite_streams)
        throw bad_entry("the builder lacks its binary streams");
    if (b > 0 && !builder.palette_stream)
        throw bad_entry("the builder lacks its palette stream");

    auto binary_words = [&](i64 answer) {
        std::vector<nword> words = builder.finite_streams(answer);
        if (i64(words.size()) != a)
            throw bad_entry("the builder yields " + std::to_string(words.size()) +
                            " binary streams, expected " + std::to_string(a));
        for (const nword& w : words) require_bits(w);
        return words;
    };
    auto palette_word = [&](i64 answer) {
        nword w = builder.palette_stream(answer);
        if (i64(w.alphabet()) != b)
            throw bad_entry("palette stream over " + std::to_string(w.alphabet()) +
                            " letters, expected " + std::to_string(b));
        return w;
    };

    // Split the tentative run into constant segments; all but the last one
    // contribute junk prefixes.
    std::vector<std::vector<colour>> junk(static_cast<std::size_t>(a));
    std::vector<colour> palette_junk;
    i64 changes = 0;
    i64 current = p.tentative(0);
    i64 length = 1;
    auto flush_segment = [&]() {
        if (a > 0) {
            std::vector<nword> words = binary_words(current);
            for (i64 j = 0; j < a; ++j)
                for (i64 s = 0; s < length; ++s)
                    junk[std::size_t(j)].push_back(words[std::size_t(j)].at(s));
        }
        if (b > 0) {
            nword w = palette_word(current);
            for (i64 s = 0; s < length; ++s) palette_junk.push_back(w.at(s));
        }
    };
    for (i64 s = 1; s < p.horizon; ++s) {
        i64 v = p.tentative(s);
        if (v == current) {
            ++length;
            continue;
        }
        ++changes;
        if (changes > p.budget)
            throw mindchange_budget_exceeded(
                "mind change " + std::to_string(changes) + " at stage " +
                std::to_string(s) + " passes the budget " + std::to_string(p.budget));
        flush_segment();
        current = v;
        length = 1;
    }

    parallel_run run;
    run.answer = current;
    run.mindchanges = changes;
    if (a > 0) {
        std::vector<nword> words = binary_words(current);
        for (i64 j = 0; j < a; ++j) {
            std::vector<colour> prefix = junk[std::size_t(j)];
            const nword& w = words[std::size_t(j)];
            prefix.insert(prefix.end(), w.prefix().begin(), w.prefix().end());
            run.finite_parts.push_back(isfinite_instance{nword(2, prefix, w.cycle())});
        }
    }
    if (b > 0) {
        nword w = palette_word(current);
        std::vector<colour> prefix = palette_junk;
        prefix.insert(prefix.end(), w.prefix().begin(), w.prefix().end());
        run.palette_part = ect_instance{nword(w.alphabet(), prefix, w.cycle())};
    }
    return run;
}

std::vector<std::int64_t> parallel_run::decode() const {
    std::vector<i64> out;
    for (const problem_instance& part : finite_parts)
        out.push_back(oracle_solve(part).canonical);
    if (palette_part) out.push_back(oracle_solve(*palette_part).canonical);
    out.push_back(answer);
    return out;
}

namespace {

// Colours shifted down one at the non-zero positions, the last seen value
// repeated elsewhere. Eventually periodic because the tail is driven by the
// finite state (cycle position, last value).
nword rest_word(const nword& w) {
    std::vector<colour> head;
    colour last = 0;
    for (colour c : w.prefix()) {
        if (c >= 1) last = c - 1;
        head.push_back(last);
    }
    std::map<std::pair<std::size_t, colour>, std::size_t> seen;
    std::vector<colour> tail;
    std::size_t idx = 0;
    while (true) {
        auto hit = seen.find({idx, last});
        if (hit != seen.end()) {
            head.insert(head.end(), tail.begin(), tail.begin() + i64(hit->second));
            std::vector<colour> cycle(tail.begin() + i64(hit->second), tail.end());
            return nword(w.alphabet() - 1, std::move(head), std::move(cycle));
        }
        seen.emplace(std::make_pair(idx, last), tail.size());
        colour c = w.cycle()[idx];
        if (c >= 1) last = c - 1;
        tail.push_back(last);
        idx = (idx + 1) % w.cycle().size();
    }
}

// Solution set of the enumeration that puts out 2n on the n+1st zero and
// 2n+1 on the n+1st one: a recurring bit exhausts its parity class.
answer_set parity_survivors(const nword& v) {
    bool zeroes = v.recurring().count(0) == 1;
    bool ones = v.recurring().count(1) == 1;
    answer_set s;
    if (zeroes && ones) {
        s.tail = 0;
        s.canonical = 0;
        return s;
    }
    i64 finite_count = 0;
    colour sporadic = zeroes ? 1 : 0;
    for (colour c : v.prefix()) finite_count += c == sporadic;
    s.tail = 2 * finite_count + (zeroes ? 1 : 0);
    s.stride = 2;
    s.canonical = *s.tail;
    return s;
}

}  // namespace

crt_chain_data crt_chain(const nword& word) {
    if (word.alphabet() < 2)
        throw domain_violation("the chain needs at least two colours");
    crt_chain_data data;
    nword cur = word;
    while (cur.alphabet() > 2) {
        std::vector<colour> fold(std::size_t(cur.alphabet()), 1);
        fold[0] = 0;
        nword split = cur.relabel(2, fold);
        data.levels.push_back({split, parity_survivors(split)});
        cur = rest_word(cur);
    }
    data.levels.push_back({cur, parity_survivors(cur)});
    return data;
}

std::int64_t crt_chain_data::decode(const std::vector<std::int64_t>& answers) const {
    if (answers.size() != levels.size())
        throw domain_violation("expected " + std::to_string(levels.size()) +
                               " oracle answers, got " + std::to_string(answers.size()));
    for (std::size_t i = 0; i < answers.size(); ++i) {
        if (answers[i] < 0)
            throw domain_violation("oracle answers are non-negative");
        if (answers[i] % 2 != 0) return i64(i);
    }
    return i64(levels.size());
}

namespace {

njson subtree(const std::string& text) { return njson::parse(text); }

njson token_tree(const stream_token& t) {
    return std::visit(
        overloaded{[](const pause_token&) { return njson{{"kind", "pause"}}; },
                   [](const sweep_token&) { return njson{{"kind", "sweep"}}; },
                   [](const enum_token& e) {
                       return njson{{"kind", "enum"}, {"value", e.value}};
                   }},
        t);
}

stream_token token_from_tree(const njson& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "pause") return pause_token{};
    if (kind == "sweep") return sweep_token{};
    if (kind == "enum") return enum_token{j.at("value").get<i64>()};
    throw parse_error("unknown token kind " + kind);
}

njson stream_tree(const std::string& kind, const choice_stream& s) {
    njson tokens = njson::array();
    for (const stream_token& t : s.tokens()) tokens.push_back(token_tree(t));
    return njson{{"kind", kind},
                 {"schedule", subtree(nword_to_json(s.schedule()))},
                 {"tokens", tokens}};
}

njson word_instance_tree(const std::string& kind, const nword& w) {
    return njson{{"kind", kind}, {"word", subtree(nword_to_json(w))}};
}

choice_stream stream_from_tree(const njson& j) {
    std::vector<stream_token> tokens;
    for (const njson& t : j.at("tokens")) tokens.push_back(token_from_tree(t));
    return choice_stream(nword_from_json(j.at("schedule").dump()), std::move(tokens));
}

}  // namespace

std::string problem_instance_to_json(const problem_instance& inst) {
    njson j = std::visit(
        overloaded{[](const lpo_instance& p) { return word_instance_tree("lpo", p.bits); },
                   [](const isfinite_instance& p) {
                       return word_instance_tree("isFinite", p.bits);
                   },
                   [](const cn_instance& p) { return stream_tree("cn", p.stream); },
                   [](const tcn_instance& p) { return stream_tree("tcn", p.stream); },
                   [](const ect_instance& p) { return word_instance_tree("ect", p.word); },
                   [](const crt_instance& p) { return word_instance_tree("crt", p.word); },
                   [](const crt_plus_instance& p) {
                       return word_instance_tree("crtPlus", p.word);
                   },
                   [](const crt_n_instance& p) {
                       return word_instance_tree("crtN", p.word);
                   },
                   [](const bound_instance& p) { return stream_tree("bound", p.stream); }},
        inst);
    return j.dump();
}

problem_instance problem_instance_from_json(const std::string& text) {
    try {
        njson j = njson::parse(text);
        std::string kind = j.at("kind").get<std::string>();
        auto word = [&] { return nword_from_json(j.at("word").dump()); };
        if (kind == "lpo") return lpo_instance{word()};
        if (kind == "isFinite") return isfinite_instance{word()};
        if (kind == "cn") return cn_instance{stream_from_tree(j)};
        if (kind == "tcn") return tcn_instance{stream_from_tree(j)};
        if (kind == "ect") return ect_instance{word()};
        if (kind == "crt") return crt_instance{word()};
        if (kind == "crtPlus") return crt_plus_instance{word()};
        if (kind == "crtN") return crt_n_instance{word()};
        if (kind == "bound") return bound_instance{stream_from_tree(j)};
        throw parse_error("unknown problem kind " + kind);
    } catch (const njson::exception& e) {
        throw parse_error(e.what());
    }
}

std::string trace_to_json_lines(const machine_trace& t) {
    std::string out;
    for (const stage_record& rec : t.stages) {
        njson j{{"stage", rec.stage}, {"emissions", rec.emissions}};
        if (rec.commitment) j["commitment"] = *rec.commitment;
        if (rec.mindchange) j["mindchange"] = true;
        out += j.dump();
        out += '\n';
    }
    return out;
}

machine_trace trace_from_json_lines(const std::string& text) {
    machine_trace t;
    try {
        std::size_t start = 0;
        while (start < text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string::npos) end = text.size();
            std::string line = text.substr(start, end - start);
            start = end + 1;
            if (line.empty()) continue;
            njson j = njson::parse(line);
            stage_record rec;
            rec.stage = j.at("stage").get<i64>();
            rec.emissions = j.at("emissions").get<std::vector<std::vector<i64>>>();
            if (j.contains("commitment")) rec.commitment = j["commitment"].get<i64>();
            if (j.contains("mindchange")) rec.mindchange = j["mindchange"].get<bool>();
            t.stages.push_back(std::move(rec));
        }
    } catch (const njson::exception& e) {
        throw parse_error(e.what());
    }
    if (!t.stages.empty()) t.outputs = t.stages.front().emissions.size();
    for (const stage_record& rec : t.stages)
        if (rec.emissions.size() != t.outputs)
            throw parse_error("records disagree on the stream count");
    return t;
}

}  // namespace ramq
