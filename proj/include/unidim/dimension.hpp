#pragma once

#include "dimension/checks.hpp"
#include "dimension/estimators.hpp"
#include "dimension/growth.hpp"
#include "dimension/weights.hpp"
