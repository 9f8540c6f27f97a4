#pragma once

// Umbrella header for the whole library.

#include "drs/ell2.hpp"
#include "drs/experiments.hpp"
#include "drs/iteration.hpp"
#include "drs/operators.hpp"
#include "drs/rates.hpp"
#include "drs/rng.hpp"
#include "drs/subspace.hpp"
#include "drs/svg.hpp"
#include "drs/text_format.hpp"
#include "drs/two_lines.hpp"
