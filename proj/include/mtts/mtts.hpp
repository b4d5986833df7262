#pragma once

#include "benchmarks.hpp"
#include "controller.hpp"
#include "core.hpp"
#include "experiment.hpp"
#include "hill_climber.hpp"
#include "hydraulic.hpp"
#include "memory.hpp"
#include "multithread.hpp"
#include "search_config.hpp"
