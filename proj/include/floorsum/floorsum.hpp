#pragma once

// Umbrella header: totient floor-quotient sums, their main terms, and the
// verification machinery around them.

#include "analytic.hpp"
#include "blocks.hpp"
#include "compensated.hpp"
#include "core.hpp"
#include "sieve.hpp"
#include "summatory.hpp"
#include "sums.hpp"
#include "verify.hpp"
#include "zeta.hpp"
