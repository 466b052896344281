#pragma once

#include "core/bits.hpp"
#include "core/budget.hpp"
#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/random.hpp"
#include "distribution.hpp"
#include "experiments.hpp"
#include "gabm.hpp"
#include "greedy_procedure.hpp"
#include "hypergraph.hpp"
#include "json_io.hpp"
#include "matching.hpp"
#include "polynomial.hpp"
#include "polynomial_analysis.hpp"
#include "ramsey.hpp"
#include "slice_coupling.hpp"
#include "structure.hpp"
