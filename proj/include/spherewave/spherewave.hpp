#ifndef SPHEREWAVE_SPHEREWAVE_HPP
#define SPHEREWAVE_SPHEREWAVE_HPP

// Umbrella header.

#include "specfun.hpp"
#include "sphere.hpp"
#include "quadrature.hpp"
#include "filters.hpp"
#include "wavelet.hpp"
#include "frame.hpp"
#include "diagnostics.hpp"
#include "io.hpp"

#endif
