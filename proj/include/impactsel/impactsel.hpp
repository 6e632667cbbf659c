#pragma once

#include "impactsel/bench.hpp"
#include "impactsel/cholesky.hpp"
#include "impactsel/csv.hpp"
#include "impactsel/dataset.hpp"
#include "impactsel/errors.hpp"
#include "impactsel/grid.hpp"
#include "impactsel/matrix.hpp"
#include "impactsel/metrics.hpp"
#include "impactsel/moments.hpp"
#include "impactsel/order.hpp"
#include "impactsel/population.hpp"
#include "impactsel/processes.hpp"
#include "impactsel/regressor.hpp"
#include "impactsel/report_io.hpp"
#include "impactsel/rng.hpp"
#include "impactsel/selector.hpp"
#include "impactsel/version.hpp"
