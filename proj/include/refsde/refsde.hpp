#pragma once

#include "refsde/config.hpp"
#include "refsde/csv.hpp"
#include "refsde/fbm.hpp"
#include "refsde/grid.hpp"
#include "refsde/increments.hpp"
#include "refsde/monte_carlo.hpp"
#include "refsde/norms.hpp"
#include "refsde/path.hpp"
#include "refsde/rng.hpp"
#include "refsde/skorokhod.hpp"
#include "refsde/solver.hpp"
#include "refsde/young.hpp"
