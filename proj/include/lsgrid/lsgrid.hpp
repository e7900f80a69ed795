#pragma once

// Umbrella header for the whole library.

#include "lsgrid/approximants.hpp"
#include "lsgrid/bounds.hpp"
#include "lsgrid/discretization.hpp"
#include "lsgrid/distribution.hpp"
#include "lsgrid/distribution_types.hpp"
#include "lsgrid/errors.hpp"
#include "lsgrid/io.hpp"
#include "lsgrid/lattice_pmf.hpp"
#include "lsgrid/oracle.hpp"
#include "lsgrid/panjer.hpp"
#include "lsgrid/phase_type.hpp"
#include "lsgrid/special_functions.hpp"
#include "lsgrid/tables.hpp"
