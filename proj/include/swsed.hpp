#pragma once

#include "swsed/activeblocks.hpp"
#include "swsed/analytic.hpp"
#include "swsed/engine.hpp"
#include "swsed/errors.hpp"
#include "swsed/grid.hpp"
#include "swsed/io/esri.hpp"
#include "swsed/io/scenario.hpp"
#include "swsed/io/snapshot.hpp"
#include "swsed/kernels.hpp"
#include "swsed/params.hpp"
#include "swsed/partition.hpp"
#include "swsed/physics.hpp"
#include "swsed/reconstruct.hpp"
#include "swsed/riemann.hpp"
#include "swsed/state.hpp"
#include "swsed/timestep.hpp"
