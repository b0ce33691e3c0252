#pragma once

#include "core/finite_space.hpp"
#include "core/fit.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/stats.hpp"
#include "core/window.hpp"
