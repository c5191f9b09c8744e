#pragma once

#include "breach/core.hpp"
#include "breach/random.hpp"
#include "breach/prune.hpp"
#include "breach/decompose.hpp"
#include "breach/max_flow.hpp"
#include "breach/assign.hpp"
#include "breach/oracle.hpp"
#include "breach/breach.hpp"
#include "breach/io.hpp"
#include "breach/bench.hpp"
