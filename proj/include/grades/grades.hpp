#pragma once

#include "grades/combinations.hpp"
#include "grades/core.hpp"
#include "grades/errors.hpp"
#include "grades/hard_threshold.hpp"
#include "grades/instance_gen.hpp"
#include "grades/random.hpp"
#include "grades/rip_bounds.hpp"
#include "grades/solver.hpp"
