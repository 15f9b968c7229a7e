#pragma once

#include "bnet/bayes_net.hpp"
#include "bnet/dag.hpp"
#include "bnet/data.hpp"
#include "bnet/equivalence.hpp"
#include "bnet/errors.hpp"
#include "bnet/experiments.hpp"
#include "bnet/hyper.hpp"
#include "bnet/rng.hpp"
#include "bnet/scores.hpp"
#include "bnet/search.hpp"
#include "bnet/stats.hpp"
