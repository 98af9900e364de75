#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ramq/paircol.hpp"
#include "ramq/problems.hpp"
#include "ramq/qcolouring.hpp"

namespace ramq {

// ---------------------------------------------------------------------------
// Inputs accepted by the rational-side reductions. Each alternative is the
// source-problem instance in its finite presentation.
// ---------------------------------------------------------------------------

// A tuple of binary sequences, one per component of an LPO- or
// IsFinite-power instance.
struct sequence_family {
    std::vector<nword> bits;
};

struct colouring_input {
    q_colouring colouring;
};

struct word_input {
    nword word;
};

struct colouring_pair_input {
    q_colouring left;
    q_colouring right;
};

struct ordered_input {
    ordered_q_colouring colouring;
};

struct additive_input {
    additive_q_colouring colouring;
};

// One switchable colouring for the restart protocols: usable from the given
// stage on, colours read from the word by position (recurrence search) or by
// reduced denominator (interval search).
struct restart_candidate {
    std::int64_t available_from = 0;
    nword word;
};

// A finite initial segment of naturals enumerated online plus the candidate
// colourings the protocol switches through.
struct restart_input {
    choice_stream segment;
    std::vector<restart_candidate> candidates;
};

using reduction_input =
    std::variant<sequence_family, colouring_input, word_input, colouring_pair_input,
                 ordered_input, additive_input, restart_input>;

// ---------------------------------------------------------------------------
// Answers. The same vocabulary serves decoded source answers and oracle
// replies, so reply tuples and final answers compose without re-encoding.
// ---------------------------------------------------------------------------

struct values_answer {
    std::vector<std::int64_t> values;
};

struct set_answer {
    colour_set colours;
};

struct interval_answer {
    interval window;
};

struct colour_answer {
    colour value = 0;
};

struct bound_answer {
    std::int64_t bound = 0;
};

// An interval together with a colour occurring densely in it.
struct eta_answer {
    interval window;
    colour value = 0;
};

struct paired_answer {
    shuffle_answer left;
    shuffle_answer right;
};

// Restart-protocol answers: the final candidate index (a valid bound for the
// enumerated segment) plus the unshifted inner answer.
struct unshifted_colour {
    std::int64_t bound = 0;
    colour value = 0;
};

struct unshifted_interval {
    std::int64_t bound = 0;
    interval window;
};

using reduction_answer =
    std::variant<values_answer, set_answer, interval_answer, shuffle_answer,
                 ordered_answer, paired_answer, colour_answer, bound_answer, eta_answer,
                 dense_homogeneous_answer, unshifted_colour, unshifted_interval>;

// One reply per oracle slot of a forward pass, in output order.
using reply_tuple = std::vector<reduction_answer>;

// ---------------------------------------------------------------------------
// Stream claims. A forward pass commits, per machine output, either to a
// certified benchmark instance (checked by the cluster-4 consistency rules)
// or to a pointwise expectation on the flattened emission positions from a
// stabilisation point on.
// ---------------------------------------------------------------------------

struct pointwise_claim {
    std::function<std::int64_t(std::int64_t position)> expected;
    std::int64_t stable_position = 0;
};

using stream_claim = std::variant<certified_instance, pointwise_claim>;

struct reduction_witness {
    stage_machine machine;
    std::vector<stream_claim> claims;
};

// Checks every output of the recorded trace against its claim: benchmark
// claims via check_consistency, pointwise claims token for token from their
// stabilisation position. Throws inconsistent on the first violation.
void check_witness(const machine_trace& trace, const reduction_witness& witness,
                   std::int64_t horizon);

// The canonical input stream a machine reads: word letters, colour values on
// the rational enumeration, pair values on the representative enumeration, or
// segment tokens; used by run_machine.
token_source input_source(const reduction_input& input);

// ---------------------------------------------------------------------------
// The registry record. `forward` builds the streaming machine and its claims;
// `replies` serves oracle reply tuples (canonical first, then skewed but
// still valid variants); `decode` maps any served tuple back to a source
// answer; `valid` is the source problem's exact validity predicate.
// ---------------------------------------------------------------------------

struct reduction {
    std::string name;
    std::string source_problem;
    std::string target_problem;
    std::string description;
    std::function<reduction_witness(const reduction_input&)> forward;
    std::function<std::vector<reply_tuple>(const reduction_input&, const reduction_witness&)>
        replies;
    std::function<reduction_answer(const reduction_input&, const reply_tuple&)> decode;
    std::function<bool(const reduction_input&, const reduction_answer&)> valid;
};

// All registered rational-side reductions, in a fixed order.
const std::vector<reduction>& reduction_registry();

// Lookup by name; a leading "q:" prefix is accepted. Throws bad_entry for
// unknown names.
const reduction& find_reduction(const std::string& name);

// ---------------------------------------------------------------------------
// Exact structural helpers shared by certificates, replies and validity.
// ---------------------------------------------------------------------------

// Colours that are dense in some window (supported cell kinds only).
colour_set dense_somewhere(const q_colouring& c);

// The exact family of colour sets C for which some window is a shuffle with
// occurring set C: one candidate per cell.
std::set<colour_set> shuffle_colour_sets(const q_colouring& c);

// Order isomorphism between the rationals and a bounded open window, exact on
// rationals in both directions (two Moebius pieces glued at the midpoint).
struct window_iso {
    explicit window_iso(interval window);

    rat into(const rat& q) const;
    rat back(const rat& p) const;
    const interval& window() const { return window_; }

  private:
    interval window_;
};

// JSON presentations for corpus files.
std::string reduction_input_to_json(const reduction_input& input);
reduction_input reduction_input_from_json(const std::string& text);
std::string reduction_answer_to_json(const reduction_answer& answer);

}  // namespace ramq
