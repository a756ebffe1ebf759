#pragma once

#include "bellsieve/types.hpp"
#include "bellsieve/hgmodes.hpp"
#include "bellsieve/twophoton.hpp"
#include "bellsieve/optics.hpp"
#include "bellsieve/analysis.hpp"
#include "bellsieve/io.hpp"
#include "bellsieve/circuit_io.hpp"
