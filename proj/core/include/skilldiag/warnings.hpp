#pragma once

#include <cstddef>
#include <string>

namespace skilldiag {

// Structured non-fatal diagnostics. Numerical guards (zero-norm cosine,
// log-domain clamps, unsatisfiable noise constraints) report through here
// so training can continue while tests can still observe the event.
namespace warnings {

/// Records one occurrence of `code`. The first occurrence per code is
/// echoed to stderr with `message`; later ones only increment the counter.
void emit(const std::string& code, const std::string& message);

/// Number of times `code` has been emitted since the last reset.
std::size_t count(const std::string& code);

/// Total warnings emitted since the last reset.
std::size_t total();

/// Clears all counters (used by tests).
void reset();

}  // namespace warnings
}  // namespace skilldiag
