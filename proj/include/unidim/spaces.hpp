#pragma once

#include "spaces/canopy.hpp"
#include "spaces/cantor.hpp"
#include "spaces/combinators.hpp"
#include "spaces/digits.hpp"
#include "spaces/drainage.hpp"
#include "spaces/gw.hpp"
#include "spaces/lattice.hpp"
#include "spaces/model.hpp"
#include "spaces/offspring.hpp"
#include "spaces/pwit.hpp"
#include "spaces/walks.hpp"
