#pragma once

// Convenience include for the whole library. io.hpp pulls in the bundled
// nlohmann/json single header, so the vendor directory must be on the
// include path (the CMake interface target lasernoise_vendor does this).

#include "lasernoise/acceptance.hpp"
#include "lasernoise/device.hpp"
#include "lasernoise/errors.hpp"
#include "lasernoise/fluctuations.hpp"
#include "lasernoise/gillespie.hpp"
#include "lasernoise/io.hpp"
#include "lasernoise/langevin.hpp"
#include "lasernoise/noise_threshold.hpp"
#include "lasernoise/rng.hpp"
#include "lasernoise/steady_state.hpp"
#include "lasernoise/sweeps.hpp"
#include "lasernoise/trajectory_stats.hpp"
#include "lasernoise/version.hpp"
