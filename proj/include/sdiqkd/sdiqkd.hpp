#pragma once

// Umbrella header for the semi-device-independent one-way QKD toolkit.

#include "sdiqkd/qubit.hpp"
#include "sdiqkd/rng.hpp"
#include "sdiqkd/rational.hpp"
#include "sdiqkd/setup.hpp"
#include "sdiqkd/table.hpp"
#include "sdiqkd/witness.hpp"
#include "sdiqkd/rac.hpp"
#include "sdiqkd/security.hpp"
#include "sdiqkd/seesaw.hpp"
#include "sdiqkd/facets.hpp"
#include "sdiqkd/simulate.hpp"
