#pragma once

#include "hmbp/bench.hpp"
#include "hmbp/core.hpp"
#include "hmbp/criteria.hpp"
#include "hmbp/fixtures.hpp"
#include "hmbp/instance_io.hpp"
#include "hmbp/matching.hpp"
#include "hmbp/oracle.hpp"
#include "hmbp/solver.hpp"
#include "hmbp/witness.hpp"
