#pragma once

#include "sbandit/core.hpp"
#include "sbandit/dp.hpp"
#include "sbandit/env.hpp"
#include "sbandit/experiments.hpp"
#include "sbandit/pde.hpp"
#include "sbandit/special_functions.hpp"
#include "sbandit/strategy.hpp"
