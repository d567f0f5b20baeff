#pragma once

#include "stqp/defect.hpp"
#include "stqp/ensemble.hpp"
#include "stqp/error.hpp"
#include "stqp/kkt.hpp"
#include "stqp/matrix.hpp"
#include "stqp/oracle.hpp"
#include "stqp/rng.hpp"
#include "stqp/solver.hpp"
#include "stqp/stats.hpp"
