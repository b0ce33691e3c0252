#pragma once

#include "coverings/covering.hpp"
#include "coverings/intensity.hpp"
