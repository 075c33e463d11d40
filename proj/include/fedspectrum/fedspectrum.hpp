#ifndef FEDSPECTRUM_FEDSPECTRUM_HPP
#define FEDSPECTRUM_FEDSPECTRUM_HPP
#pragma once

#include "aggregation.hpp"
#include "attacks.hpp"
#include "bytes.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "dataset_io.hpp"
#include "defense.hpp"
#include "error.hpp"
#include "federation.hpp"
#include "grid.hpp"
#include "learner.hpp"
#include "metrics.hpp"
#include "model_io.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "scenarios.hpp"
#include "spectrum_env.hpp"

#endif  // FEDSPECTRUM_FEDSPECTRUM_HPP
