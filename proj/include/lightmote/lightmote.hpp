#pragma once

// Umbrella header: the full simulator surface.

#include "lightmote/apps.hpp"
#include "lightmote/calibrate.hpp"
#include "lightmote/compare.hpp"
#include "lightmote/energy.hpp"
#include "lightmote/engine.hpp"
#include "lightmote/power_manager.hpp"
#include "lightmote/presets.hpp"
#include "lightmote/qos.hpp"
#include "lightmote/report_io.hpp"
#include "lightmote/rng.hpp"
#include "lightmote/scenario.hpp"
#include "lightmote/trace.hpp"
