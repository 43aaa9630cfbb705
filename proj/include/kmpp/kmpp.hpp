#pragma once

#include "bench.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "lloyd.hpp"
#include "matching.hpp"
#include "oracle.hpp"
#include "rng.hpp"
#include "seeding.hpp"
