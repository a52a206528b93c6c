#pragma once

#include "corrnet/correlation.hpp"
#include "corrnet/date.hpp"
#include "corrnet/error.hpp"
#include "corrnet/export.hpp"
#include "corrnet/geo_scaling.hpp"
#include "corrnet/market_data.hpp"
#include "corrnet/mst.hpp"
#include "corrnet/pipeline.hpp"
#include "corrnet/returns_volatility.hpp"
#include "corrnet/roster.hpp"
#include "corrnet/synthetic_bench.hpp"
#include "corrnet/threshold_network.hpp"
