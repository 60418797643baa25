#pragma once

#include "capregion/rational.hpp"
#include "capregion/network.hpp"
#include "capregion/lp.hpp"
#include "capregion/steiner.hpp"
#include "capregion/field.hpp"
#include "capregion/lincode.hpp"
#include "capregion/polytope.hpp"
#include "capregion/packing.hpp"
#include "capregion/routing.hpp"
#include "capregion/semilinear.hpp"
#include "capregion/corpus.hpp"
#include "capregion/plot.hpp"
