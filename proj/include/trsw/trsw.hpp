#pragma once
/// \file trsw.hpp
/// \brief Umbrella header for the solver library.

#include "trsw/core_model.hpp"
#include "trsw/reconstruction.hpp"
#include "trsw/flux.hpp"
#include "trsw/time_stepper.hpp"
#include "trsw/scenarios.hpp"
#include "trsw/diagnostics.hpp"
#include "trsw/io.hpp"
