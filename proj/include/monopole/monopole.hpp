#pragma once

// Umbrella header: superintegrable magnetic-monopole dynamics on the
// deformed 3D background, with exact conserved-quantity machinery.

#include "monopole/common.hpp"
#include "monopole/dual.hpp"
#include "monopole/dynamics.hpp"
#include "monopole/integrals.hpp"
#include "monopole/io.hpp"
#include "monopole/linalg.hpp"
#include "monopole/model.hpp"
#include "monopole/parity.hpp"
#include "monopole/sampling.hpp"
#include "monopole/transforms.hpp"
