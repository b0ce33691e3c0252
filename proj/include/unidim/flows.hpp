#pragma once

#include "flows/badic.hpp"
#include "flows/flow_tree.hpp"
#include "flows/norm.hpp"
