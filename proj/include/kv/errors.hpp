#ifndef KV_ERRORS_HPP
#define KV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kv {

// Exit-code taxonomy used by the CLI: usage errors are distinguished from
// verification failures and from internal inconsistencies (which indicate a
// convention mismatch or a broken invariant upstream, never bad user input).
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct usage_error : error {
    using error::error;
};

struct unsupported_characteristic : usage_error {
    using usage_error::usage_error;
};

struct shape_error : error {
    using error::error;
};

struct division_by_zero : error {
    using error::error;
};

// A derivation reached a state the underlying theory forbids.
struct internal_inconsistency : error {
    using error::error;
};

struct domain_error : error {
    using error::error;
};

// Denominator vanished at a numeric assignment; caller redraws.
struct unlucky_specialization : error {
    using error::error;
};

struct exhaustion_error : error {
    using error::error;
};

struct degenerate_theta : error {
    using error::error;
};

struct degenerate_curve : error {
    using error::error;
};

struct genericity_error : error {
    using error::error;
};

struct reconstruction_failure : error {
    using error::error;
};

// A square root was requested that only exists after a field extension.
struct extension_needed : error {
    using error::error;
};

} // namespace kv

#endif
