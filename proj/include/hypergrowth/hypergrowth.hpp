#ifndef HYPERGROWTH_HYPERGROWTH_HPP
#define HYPERGROWTH_HYPERGROWTH_HPP

// Umbrella header.

#include "hypergrowth/error.hpp"
#include "hypergrowth/time_series.hpp"
#include "hypergrowth/ingest.hpp"
#include "hypergrowth/ols.hpp"
#include "hypergrowth/hypermodel.hpp"
#include "hypergrowth/regimes.hpp"
#include "hypergrowth/hypotheses.hpp"
#include "hypergrowth/simulate.hpp"
#include "hypergrowth/json_io.hpp"
#include "hypergrowth/report.hpp"
#include "hypergrowth/version.hpp"

#endif  // HYPERGROWTH_HYPERGROWTH_HPP
