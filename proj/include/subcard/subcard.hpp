//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "subcard/bipartite.hpp"
#include "subcard/candidate_space.hpp"
#include "subcard/clopper_pearson.hpp"
#include "subcard/cycle_index.hpp"
#include "subcard/exact.hpp"
#include "subcard/graph.hpp"
#include "subcard/graph_sampler.hpp"
#include "subcard/pipeline.hpp"
#include "subcard/refine.hpp"
#include "subcard/tree_sampler.hpp"
#include "subcard/types.hpp"
