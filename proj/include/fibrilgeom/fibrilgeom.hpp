#pragma once

// Umbrella header.

#include "fibrilgeom/curvature_torsion.hpp"
#include "fibrilgeom/curve_metrics.hpp"
#include "fibrilgeom/error.hpp"
#include "fibrilgeom/hbond_stats.hpp"
#include "fibrilgeom/pdb.hpp"
#include "fibrilgeom/persistence.hpp"
#include "fibrilgeom/quaternion.hpp"
#include "fibrilgeom/version.hpp"
