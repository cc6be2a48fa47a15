#pragma once

#include "gelpf/error.hpp"
#include "gelpf/numeric.hpp"
#include "gelpf/rng.hpp"
#include "gelpf/distribution.hpp"
#include "gelpf/sample.hpp"
#include "gelpf/quadrature.hpp"
#include "gelpf/likelihood.hpp"
#include "gelpf/optimize.hpp"
#include "gelpf/estimators.hpp"
#include "gelpf/gof.hpp"
#include "gelpf/stats.hpp"
#include "gelpf/parallel.hpp"
#include "gelpf/bootstrap.hpp"
#include "gelpf/simulation.hpp"
#include "gelpf/io.hpp"
