// hapsgnss umbrella header.
#pragma once

#include <hapsgnss/atmosphere.hpp>
#include <hapsgnss/constants.hpp>
#include <hapsgnss/ephemeris.hpp>
#include <hapsgnss/error_models.hpp>
#include <hapsgnss/errors.hpp>
#include <hapsgnss/geodesy.hpp>
#include <hapsgnss/gps_time.hpp>
#include <hapsgnss/haps.hpp>
#include <hapsgnss/metrics.hpp>
#include <hapsgnss/rinex.hpp>
#include <hapsgnss/runner.hpp>
#include <hapsgnss/scenario.hpp>
#include <hapsgnss/spp.hpp>
