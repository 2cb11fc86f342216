#pragma once

#include "hzlab/demand.hpp"
#include "hzlab/dimacs.hpp"
#include "hzlab/equilibrium.hpp"
#include "hzlab/lp.hpp"
#include "hzlab/market.hpp"
#include "hzlab/padding.hpp"
#include "hzlab/ppad.hpp"
#include "hzlab/rational.hpp"
#include "hzlab/sat.hpp"
#include "hzlab/threshold_game.hpp"
#include "hzlab/toy.hpp"
#include "hzlab/verdict.hpp"
