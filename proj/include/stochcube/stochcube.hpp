#pragma once

// Umbrella header for the stochcube library: the algebra of cubic
// stochastic matrices of type (1,2), semigroup actions by square
// stochastic matrices, marginal decompositions, the induced block Markov
// chains, and quadratic stochastic operators.

#include "stochcube/core.hpp"
#include "stochcube/decomp.hpp"
#include "stochcube/algebra.hpp"
#include "stochcube/actions.hpp"
#include "stochcube/markov.hpp"
#include "stochcube/qso.hpp"
#include "stochcube/io.hpp"
