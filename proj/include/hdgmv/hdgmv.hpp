#pragma once

// Umbrella header.

#include "hdgmv/backtest.hpp"
#include "hdgmv/csv.hpp"
#include "hdgmv/datagen.hpp"
#include "hdgmv/errors.hpp"
#include "hdgmv/estimators.hpp"
#include "hdgmv/limits.hpp"
#include "hdgmv/linalg.hpp"
#include "hdgmv/moments.hpp"
#include "hdgmv/montecarlo.hpp"
#include "hdgmv/portfolio.hpp"
#include "hdgmv/quadform.hpp"
#include "hdgmv/risk.hpp"
#include "hdgmv/rng.hpp"
#include "hdgmv/types.hpp"
