#pragma once

// Umbrella header for the bursty peaks-over-threshold toolkit.

#include "ctre/diagnostics.hpp"
#include "ctre/estimators.hpp"
#include "ctre/event_series.hpp"
#include "ctre/exceedances.hpp"
#include "ctre/forecast.hpp"
#include "ctre/io.hpp"
#include "ctre/math_utils.hpp"
#include "ctre/mittag_leffler.hpp"
#include "ctre/rng.hpp"
#include "ctre/run.hpp"
#include "ctre/simulate.hpp"
#include "ctre/stability.hpp"
#include "ctre/stable.hpp"
