#pragma once

#include "extremal/error.hpp"
#include "extremal/format.hpp"
#include "extremal/operator.hpp"
#include "extremal/oracle.hpp"
#include "extremal/problem.hpp"
#include "extremal/problem_io.hpp"
#include "extremal/report_io.hpp"
#include "extremal/solver.hpp"
#include "extremal/sweeps.hpp"
