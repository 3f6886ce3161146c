#ifndef BEXP_BEXP_HPP_
#define BEXP_BEXP_HPP_

#include "bexp/numeric.hpp"
#include "bexp/convex.hpp"
#include "bexp/weight.hpp"
#include "bexp/experiments.hpp"
#include "bexp/divergences.hpp"
#include "bexp/losses.hpp"
#include "bexp/information.hpp"
#include "bexp/bounds.hpp"
#include "bexp/curves.hpp"
#include "bexp/variational.hpp"

#endif  // BEXP_BEXP_HPP_
