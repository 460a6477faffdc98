#pragma once

#include <iosfwd>

namespace hedseg {

/// Embedded verification suite: frozen projection fixtures, pathological
/// instances, extreme-resolution behavior, equilibrium soundness on random
/// graphs, and greedy-vs-exhaustive union agreement. Prints one line per
/// check; returns false if any check fails.
bool run_selftest(std::ostream& out);

}  // namespace hedseg
