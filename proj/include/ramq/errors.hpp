#pragma once

#include <stdexcept>
#include <string>

namespace ramq {

// Root of everything this library throws on purpose.
struct ramq_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Construction-time validation failures.
struct bad_entry : ramq_error {
    using ramq_error::ramq_error;
};
struct not_associative : ramq_error {
    not_associative(int a, int b, int c)
        : ramq_error("associativity fails at (" + std::to_string(a) + "," +
                     std::to_string(b) + "," + std::to_string(c) + ")"),
          a_(a), b_(b), c_(c) {}
    int a_, b_, c_;
};
struct not_homomorphism : ramq_error {
    not_homomorphism(int a, int b)
        : ramq_error("homomorphism law fails at (" + std::to_string(a) + "," +
                     std::to_string(b) + ")"),
          a_(a), b_(b) {}
    int a_, b_;
};

// Domain/precondition violations at call time.
struct domain_violation : ramq_error {
    using ramq_error::ramq_error;
};
struct ambient_mismatch : ramq_error {
    using ramq_error::ramq_error;
};
struct point_outside_ambient : domain_violation {
    using domain_violation::domain_violation;
};
// A pair query with its endpoints out of order.
struct order_violation : domain_violation {
    using domain_violation::domain_violation;
};

struct empty_ambient : domain_violation {
    using domain_violation::domain_violation;
};

// Structured-colouring builders that cannot represent a requested value.
struct pair_unsupported : ramq_error {
    using ramq_error::ramq_error;
};
// An exact query outside the domain where this structure can answer exactly.
struct unsupported_query : ramq_error {
    using ramq_error::ramq_error;
};
struct builder_not_closed : ramq_error {
    using ramq_error::ramq_error;
};

// Runtime faults of stage machines and their bookkeeping.
struct machine_fault : ramq_error {
    using ramq_error::ramq_error;
};
struct inconsistent : ramq_error {
    using ramq_error::ramq_error;
};
struct mindchange_budget_exceeded : machine_fault {
    using machine_fault::machine_fault;
};

// A checked law that is supposed to be a theorem failed; always a bug.
struct law_violated : ramq_error {
    using ramq_error::ramq_error;
};

// Harness-level verification failure (an expectation about a corpus run).
struct verification_failed : ramq_error {
    using ramq_error::ramq_error;
};

// Parsing / serialization problems.
struct parse_error : ramq_error {
    using ramq_error::ramq_error;
};

}  // namespace ramq
