#pragma once

#include "christoffel/densities.hpp"
#include "christoffel/density.hpp"
#include "christoffel/gram.hpp"
#include "christoffel/kernel.hpp"
#include "christoffel/measure.hpp"
#include "christoffel/quadrature.hpp"
#include "christoffel/spectral.hpp"
