#pragma once

#include "helix/errors.hpp"
#include "helix/grid.hpp"
#include "helix/mollifier.hpp"
#include "helix/vorticity.hpp"
#include "helix/energy.hpp"
#include "helix/scaling.hpp"
#include "helix/constructions.hpp"
#include "helix/balls.hpp"
#include "helix/spin.hpp"
#include "helix/sweep.hpp"
