#pragma once

#include "monodromy/algebra.hpp"
#include "monodromy/io.hpp"
#include "monodromy/problems.hpp"
#include "monodromy/run.hpp"
#include "monodromy/solver.hpp"
#include "monodromy/tracking.hpp"
#include "monodromy/witness.hpp"
