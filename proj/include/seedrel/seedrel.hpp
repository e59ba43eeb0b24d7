#pragma once

#include "seedrel/common.hpp"
#include "seedrel/corpus.hpp"
#include "seedrel/snapshot.hpp"
#include "seedrel/citescore.hpp"
#include "seedrel/stemmer.hpp"
#include "seedrel/textsim.hpp"
#include "seedrel/fusion.hpp"
#include "seedrel/evalharness.hpp"
#include "seedrel/experiment.hpp"
#include "seedrel/retrieval.hpp"
