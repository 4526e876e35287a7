#pragma once

#include <prony/applications.hpp>
#include <prony/cluster.hpp>
#include <prony/error_geometry.hpp>
#include <prony/hyperbolic.hpp>
#include <prony/io.hpp>
#include <prony/moments.hpp>
#include <prony/parallel.hpp>
#include <prony/rng.hpp>
#include <prony/roots.hpp>
#include <prony/solvability.hpp>
#include <prony/solve.hpp>
#include <prony/types.hpp>
#include <prony/varieties.hpp>
