#pragma once

#include "mobgraph/error.hpp"
#include "mobgraph/util.hpp"
#include "mobgraph/graph.hpp"
#include "mobgraph/ingest.hpp"
#include "mobgraph/export.hpp"
#include "mobgraph/metrics.hpp"
#include "mobgraph/clustering.hpp"
#include "mobgraph/census.hpp"
#include "mobgraph/regional.hpp"
#include "mobgraph/compare.hpp"
#include "mobgraph/svg.hpp"
#include "mobgraph/report.hpp"
#include "mobgraph/pipeline.hpp"
