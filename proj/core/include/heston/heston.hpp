// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header for the full library surface.

#ifndef HESTON_HESTON_HPP
#define HESTON_HESTON_HPP

#include "heston/calibration.hpp"
#include "heston/characteristic.hpp"
#include "heston/csv.hpp"
#include "heston/dates.hpp"
#include "heston/errors.hpp"
#include "heston/fisher.hpp"
#include "heston/frft.hpp"
#include "heston/greeks.hpp"
#include "heston/market_data.hpp"
#include "heston/optimize.hpp"
#include "heston/parallel.hpp"
#include "heston/pricing.hpp"
#include "heston/quadrature.hpp"
#include "heston/rng.hpp"
#include "heston/types.hpp"
#include "heston/variance_swap.hpp"

#endif // HESTON_HESTON_HPP
