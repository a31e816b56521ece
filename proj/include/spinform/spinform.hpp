#pragma once

#include "spinform/scalar.hpp"
#include "spinform/matrix.hpp"
#include "spinform/linalg.hpp"
#include "spinform/wedge.hpp"
#include "spinform/quadform.hpp"
#include "spinform/groups.hpp"
#include "spinform/sporadic.hpp"
#include "spinform/propositions.hpp"
#include "spinform/expr.hpp"
#include "spinform/cocycle.hpp"
#include "spinform/wittcheck.hpp"
#include "spinform/suite.hpp"
