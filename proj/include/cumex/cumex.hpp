#pragma once

#include "cumex/rational.hpp"
#include "cumex/sequences.hpp"
#include "cumex/polynomial.hpp"
#include "cumex/compensated.hpp"
#include "cumex/cumulant_algebra.hpp"
#include "cumex/hermite.hpp"
#include "cumex/expansion.hpp"
#include "cumex/comparison.hpp"
#include "cumex/gf2m.hpp"
#include "cumex/leakage_model.hpp"
#include "cumex/quadrature.hpp"
#include "cumex/numeric_info.hpp"
#include "cumex/sweep.hpp"
#include "cumex/golden.hpp"
#include "cumex/validation.hpp"
