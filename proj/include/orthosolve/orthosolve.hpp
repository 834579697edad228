#pragma once

// Umbrella header.

#include "orthosolve/baselines.hpp"
#include "orthosolve/eigen.hpp"
#include "orthosolve/errors.hpp"
#include "orthosolve/harness.hpp"
#include "orthosolve/lsalm.hpp"
#include "orthosolve/matrix.hpp"
#include "orthosolve/problem.hpp"
#include "orthosolve/record.hpp"
#include "orthosolve/rng.hpp"
#include "orthosolve/sets.hpp"
#include "orthosolve/stiefel.hpp"
#include "orthosolve/theory.hpp"
