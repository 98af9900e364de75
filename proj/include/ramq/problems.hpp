#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ramq/errors.hpp"
#include "ramq/nword.hpp"

namespace ramq {

// One step of a number enumeration: do nothing, enumerate a fixed value, or
// enumerate the least number not yet enumerated.
struct pause_token {
    friend bool operator==(const pause_token&, const pause_token&) = default;
};
struct enum_token {
    std::int64_t value = 0;
    friend bool operator==(const enum_token&, const enum_token&) = default;
};
struct sweep_token {
    friend bool operator==(const sweep_token&, const sweep_token&) = default;
};
using stream_token = std::variant<pause_token, enum_token, sweep_token>;

// Stage tokens as integers, for machine emissions and trace files. Values
// >= 0 enumerate themselves.
inline constexpr std::int64_t code_pause = -1;
inline constexpr std::int64_t code_sweep = -2;
std::int64_t encode_token(const stream_token& t);
stream_token decode_token(std::int64_t code);

// Finite presentation of a number enumeration: the schedule's letters index
// the token table. The range is all of N exactly when a sweep recurs.
class choice_stream {
public:
    choice_stream(nword schedule, std::vector<stream_token> tokens);

    const nword& schedule() const { return schedule_; }
    const std::vector<stream_token>& tokens() const { return tokens_; }

    stream_token token_at(std::int64_t stage) const;
    std::int64_t token_code(std::int64_t stage) const;

    bool full_range() const;
    // The enumerated set; only meaningful when the range is not everything.
    std::set<std::int64_t> finite_range() const;
    // The enumerated set after the first `stages` stages.
    std::set<std::int64_t> range_before(std::int64_t stages) const;

    friend bool operator==(const choice_stream&, const choice_stream&) = default;

private:
    nword schedule_;
    std::vector<stream_token> tokens_;
};

// Instances of the benchmark problems, each presented finitely. Binary
// sequences are words over {0, 1}; colourings of N are words over their
// palette; enumerations are choice streams.
struct lpo_instance {
    nword bits;
};
struct isfinite_instance {
    nword bits;
};
struct cn_instance {
    choice_stream stream;  // must not cover all of N
};
struct tcn_instance {
    choice_stream stream;
};
struct ect_instance {
    nword word;
};
struct crt_instance {
    nword word;  // the palette size is part of the input
};
struct crt_plus_instance {
    nword word;  // tagged member of the union over all palette sizes
};
struct crt_n_instance {
    nword word;  // the palette size is hidden from the solver
};
struct bound_instance {
    choice_stream stream;  // must enumerate an initial segment of N
};

using problem_instance =
    std::variant<lpo_instance, isfinite_instance, cn_instance, tcn_instance,
                 ect_instance, crt_instance, crt_plus_instance, crt_n_instance,
                 bound_instance>;

// The exact solution set of an instance: the explicit values plus, when the
// set is infinite, an arithmetic tail (tail, tail + stride, ...).
struct answer_set {
    std::set<std::int64_t> values;
    std::optional<std::int64_t> tail;
    std::int64_t stride = 1;
    std::int64_t canonical = 0;  // the least valid answer

    bool valid(std::int64_t a) const;
};

// Exact solution set of an instance. Throws bad_entry for malformed data and
// domain_violation when the instance falls outside its problem's domain.
answer_set oracle_solve(const problem_instance& inst);
bool valid_answer(const problem_instance& inst, std::int64_t a);

// Recomputes the answer set by direct scanning over the presentation and
// compares; throws verification_failed on any disagreement.
void cross_check_answers(const problem_instance& inst);

// Componentwise solving of a finite tuple; the empty tuple is allowed.
std::vector<answer_set> solve_parallel(const std::vector<problem_instance>& parts);
// Tagged dispatch into a finite family.
answer_set solve_coproduct(std::size_t tag, const std::vector<problem_instance>& family);

// A deterministic stage transducer. Each stage it reads one input token plus
// any oracle feedback and appends tokens to each of its output streams; it
// may also commit to an answer. Fresh program state is built per run, so the
// same machine replays identically.
class stage_machine {
public:
    struct step_result {
        std::vector<std::vector<std::int64_t>> emissions;
        std::optional<std::int64_t> commitment;
    };
    using program = std::function<step_result(std::int64_t stage, std::int64_t token,
                                              const std::vector<std::int64_t>& feedback)>;

    stage_machine(std::size_t outputs, std::function<program()> fresh);

    std::size_t outputs() const { return outputs_; }
    program start() const;

private:
    std::size_t outputs_;
    std::function<program()> fresh_;
};

using token_source = std::function<std::int64_t(std::int64_t stage)>;
using feedback_source = std::function<std::vector<std::int64_t>(std::int64_t stage)>;

// Per-stage record of a run. The commitment is the answer standing at the
// end of the stage; it carries forward until a step replaces it, and a
// replacement is flagged as a mind change.
struct stage_record {
    std::int64_t stage = 0;
    std::vector<std::vector<std::int64_t>> emissions;
    std::optional<std::int64_t> commitment;
    bool mindchange = false;

    friend bool operator==(const stage_record&, const stage_record&) = default;
};

struct machine_trace {
    std::size_t outputs = 0;
    std::vector<stage_record> stages;

    std::vector<std::int64_t> emitted(std::size_t output) const;
    std::optional<std::int64_t> final_commitment() const;
    std::int64_t mindchanges() const;

    friend bool operator==(const machine_trace&, const machine_trace&) = default;
};

// Runs the machine for exactly `horizon` stages (horizon >= 1). Throws
// machine_fault when a step's emission shape disagrees with the machine's
// declared output count.
machine_trace run_machine(const stage_machine& m, const token_source& input,
                          std::int64_t horizon, const feedback_source& feedback = nullptr);

// What a reduction promises about one emitted stream: the exact presentation
// it will have in the limit, the answer that presentation has, and the
// position from which the stream is stable (no new ones, no new range
// elements, only recurring letters).
struct certified_instance {
    problem_instance instance;
    std::int64_t answer = 0;
    std::int64_t stable_stage = 0;
};

struct certificate {
    std::vector<certified_instance> instances;
};

// Checks a run against its certificate over the first `horizon` stages:
// emitted tokens must be a prefix of each certified expansion, the certified
// answer must be valid, and nothing unstable may happen at positions past
// the certified stabilisation point, in the emissions or in the certified
// word itself. Throws inconsistent with the offending stage and stream.
void check_consistency(const machine_trace& t, const certificate& cert,
                       std::int64_t horizon);

// A computation that revises a tentative answer finitely often, with a
// declared budget of revisions; the value at the last stage is final.
struct mindchange_solver {
    std::function<std::int64_t(std::int64_t stage)> tentative;
    std::int64_t budget = 0;
    std::int64_t horizon = 0;
};

// Streams derived from a tentative answer: `a` binary words and, when b > 0,
// one word over the palette 0..b-1.
struct parallel_builder {
    std::function<std::vector<nword>(std::int64_t answer)> finite_streams;
    std::function<nword(std::int64_t answer)> palette_stream;
};

// Result of replacing a sequential composition by one parallel round: the
// instances carry the junk emitted before each mind change as a prefix.
struct parallel_run {
    std::vector<problem_instance> finite_parts;
    std::optional<problem_instance> palette_part;
    std::int64_t answer = 0;
    std::int64_t mindchanges = 0;

    // Canonical answers of the parts followed by the solver's answer. The
    // binary parts ignore finite junk, so these equal the sequential run's
    // bits; the palette bound is valid for the clean stream as well.
    std::vector<std::int64_t> decode() const;
};

// Runs the solver to its horizon, restarting the builder's streams on every
// mind change and keeping the stale tokens as prefixes. Throws
// mindchange_budget_exceeded when the declared budget is passed.
parallel_run compose_to_parallel(std::int64_t a, std::int64_t b,
                                 const mindchange_solver& p, const parallel_builder& builder);

// One level of the chain reducing a k+1-colour recurrence search to k parity
// searches: the two-colour word for this level and the exact solution set of
// the enumeration that covers evens as zeroes recur and odds as ones recur.
struct crt_level {
    nword split;
    answer_set survivors;
};

struct crt_chain_data {
    std::vector<crt_level> levels;

    // Walks the levels: an odd survivor stops at its level's colour, an even
    // one descends, and surviving every level answers the last colour.
    std::int64_t decode(const std::vector<std::int64_t>& answers) const;
};

// Splits colour 0 from the rest at each level; the rest-subsequence is padded
// with the last seen value to stay total. Requires at least two colours.
crt_chain_data crt_chain(const nword& word);

std::string problem_instance_to_json(const problem_instance& inst);
problem_instance problem_instance_from_json(const std::string& text);
// One json object per stage, newline terminated.
std::string trace_to_json_lines(const machine_trace& t);
machine_trace trace_from_json_lines(const std::string& text);

}  // namespace ramq
