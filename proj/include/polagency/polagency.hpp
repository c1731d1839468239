#pragma once

// Umbrella header.

#include "polagency/model.hpp"        // IWYU pragma: export
#include "polagency/continuation.hpp" // IWYU pragma: export
#include "polagency/beliefs.hpp"      // IWYU pragma: export
#include "polagency/certifier.hpp"    // IWYU pragma: export
#include "polagency/welfare.hpp"      // IWYU pragma: export
#include "polagency/rng.hpp"          // IWYU pragma: export
#include "polagency/simulator.hpp"    // IWYU pragma: export
#include "polagency/io.hpp"           // IWYU pragma: export
#include "polagency/sweep.hpp"        // IWYU pragma: export
