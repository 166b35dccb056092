#pragma once

// Spectral Cahn-Hilliard toolkit: periodic Fourier collocation, a two-stage
// exponential integrator with adaptive stabilization, and the analysis
// harness (diagnostics, convergence studies, stability audits).

#include "audit.hpp"
#include "config.hpp"
#include "convergence.hpp"
#include "csv.hpp"
#include "dft.hpp"
#include "energy.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "initial_conditions.hpp"
#include "operators.hpp"
#include "phi.hpp"
#include "rng.hpp"
#include "simulation.hpp"
#include "snapshot.hpp"
#include "stepper.hpp"
