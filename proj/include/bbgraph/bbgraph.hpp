#pragma once

#include "bbgraph/baselines.hpp"
#include "bbgraph/bench.hpp"
#include "bbgraph/errors.hpp"
#include "bbgraph/generator.hpp"
#include "bbgraph/graph.hpp"
#include "bbgraph/io.hpp"
#include "bbgraph/matcher.hpp"
#include "bbgraph/validate.hpp"
