#pragma once

// Umbrella header.

#include "constants.hpp"
#include "csv.hpp"
#include "dispersion.hpp"
#include "errors.hpp"
#include "fft.hpp"
#include "grid.hpp"
#include "kernels.hpp"
#include "modes.hpp"
#include "mpf1.hpp"
#include "parallel.hpp"
#include "polarization.hpp"
#include "propagation.hpp"
#include "vec.hpp"
