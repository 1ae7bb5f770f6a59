#pragma once

#include "affinity.hpp"
#include "analysis.hpp"
#include "baselines.hpp"
#include "bench.hpp"
#include "errors.hpp"
#include "generators.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "metrics.hpp"
#include "partition.hpp"
#include "rng.hpp"
#include "walk.hpp"
