#pragma once

// Umbrella header for the qnet circuit-QED network simulator.

#include "qnet/basis.hpp"
#include "qnet/common.hpp"
#include "qnet/config.hpp"
#include "qnet/diagnostics.hpp"
#include "qnet/engine.hpp"
#include "qnet/harmonic.hpp"
#include "qnet/integrate.hpp"
#include "qnet/io.hpp"
#include "qnet/lindblad.hpp"
#include "qnet/model.hpp"
#include "qnet/network.hpp"
#include "qnet/parallel.hpp"
#include "qnet/quantum.hpp"
#include "qnet/rng.hpp"
#include "qnet/semiclassical.hpp"
#include "qnet/sweep.hpp"
#include "qnet/version.hpp"
