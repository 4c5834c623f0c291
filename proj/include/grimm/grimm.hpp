#pragma once

#include "grimm/error.hpp"
#include "grimm/exponents.hpp"
#include "grimm/grimm_core.hpp"
#include "grimm/interval_factor.hpp"
#include "grimm/matching.hpp"
#include "grimm/parallel.hpp"
#include "grimm/primes.hpp"
#include "grimm/rho.hpp"
#include "grimm/smooth.hpp"
#include "grimm/sums.hpp"
