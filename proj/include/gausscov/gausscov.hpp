#pragma once

#include "gausscov/csv.hpp"
#include "gausscov/errors.hpp"
#include "gausscov/linmodel.hpp"
#include "gausscov/montecarlo.hpp"
#include "gausscov/pvalue.hpp"
#include "gausscov/selection.hpp"
#include "gausscov/specfun.hpp"
#include "gausscov/statistic.hpp"
#include "gausscov/version.hpp"
