// Invariant suite behind the `verify` subcommand.
#pragma once

#include <ostream>

#include "heatctl/simulate.hpp"

namespace heatctl {

// Runs every analytic identity check (adjointness, Lemma-2.1-type identities,
// Sylvester residual, decoupling transforms, Vandermonde, Hurwitz
// certificates) and prints one pass/fail line per check.  Returns true iff
// everything passed.
bool run_verify(const SimConfig& cfg, std::ostream& out);

}  // namespace heatctl
