#pragma once

#include "nlsw/cyclic_tridiagonal.hpp"
#include "nlsw/diagnostics.hpp"
#include "nlsw/ep_scheme.hpp"
#include "nlsw/error.hpp"
#include "nlsw/experiment.hpp"
#include "nlsw/grid.hpp"
#include "nlsw/mi_scheme.hpp"
#include "nlsw/model.hpp"
#include "nlsw/problems.hpp"
#include "nlsw/scheme_residual.hpp"
#include "nlsw/solver.hpp"
