#pragma once

// umbrella header

#include "config.hpp"
#include "ergodic.hpp"
#include "exponent.hpp"
#include "families.hpp"
#include "grid.hpp"
#include "hardy.hpp"
#include "io.hpp"
#include "norms.hpp"
#include "operators.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "report.hpp"
#include "runner.hpp"
