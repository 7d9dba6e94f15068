#pragma once

/// Umbrella header: column selection for near-optimal low-rank reconstruction.

#include <cssel/approx_svd.hpp>
#include <cssel/css.hpp>
#include <cssel/errors.hpp>
#include <cssel/io.hpp>
#include <cssel/matrix.hpp>
#include <cssel/parallel.hpp>
#include <cssel/projection.hpp>
#include <cssel/rng.hpp>
#include <cssel/sparsifier.hpp>
#include <cssel/testbeds.hpp>
