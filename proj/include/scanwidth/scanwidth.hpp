#pragma once
// Umbrella header: the whole library except the command-line wiring.
#include "scanwidth/digraph.hpp"
#include "scanwidth/exact.hpp"
#include "scanwidth/heuristics.hpp"
#include "scanwidth/io.hpp"
#include "scanwidth/layouts.hpp"
#include "scanwidth/netgen.hpp"
#include "scanwidth/reduce.hpp"
#include "scanwidth/rng.hpp"
