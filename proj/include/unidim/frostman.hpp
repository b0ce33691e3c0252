#pragma once

#include "frostman/pp.hpp"
#include "frostman/serialize.hpp"
#include "frostman/simplex.hpp"
#include "frostman/xi.hpp"
