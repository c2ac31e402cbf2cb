// rydeit.hpp - Umbrella header.

#pragma once

#include "core.hpp"
#include "optics.hpp"
#include "random.hpp"
#include "stats.hpp"
#include "propagation.hpp"
#include "montecarlo.hpp"
#include "experiments.hpp"
#include "validation.hpp"
#include "config_io.hpp"
