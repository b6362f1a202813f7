#pragma once

#include "saeos/astro.hpp"
#include "saeos/bench.hpp"
#include "saeos/errors.hpp"
#include "saeos/model.hpp"
#include "saeos/oracle.hpp"
#include "saeos/random.hpp"
#include "saeos/serialization.hpp"
#include "saeos/solver.hpp"
#include "saeos/targets.hpp"
#include "saeos/visibility.hpp"
