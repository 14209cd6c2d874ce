#pragma once

// Umbrella header for the heis library: numerical harmonic analysis on the
// Heisenberg group H^n (spectral decomposition of the sublaplacian, linear
// and bilinear Riesz means, auxiliary multiplier and square-function
// operators, bump-function decompositions, experiment runners).

#include "heis/group.hpp"
#include "heis/quadrature.hpp"
#include "heis/grid.hpp"
#include "heis/diffops.hpp"
#include "heis/laguerre.hpp"
#include "heis/spectral.hpp"
#include "heis/bump.hpp"
#include "heis/riesz.hpp"
#include "heis/experiment.hpp"
#include "heis/runners.hpp"
