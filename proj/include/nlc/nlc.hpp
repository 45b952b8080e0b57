#pragma once

// Umbrella header for the whole library.

#include "nlc/bits.hpp"
#include "nlc/boolean_function.hpp"
#include "nlc/boxes.hpp"
#include "nlc/errors.hpp"
#include "nlc/fourier.hpp"
#include "nlc/game.hpp"
#include "nlc/io.hpp"
#include "nlc/minimax.hpp"
#include "nlc/ns_value.hpp"
#include "nlc/prior.hpp"
#include "nlc/rng.hpp"
#include "nlc/simplex.hpp"
#include "nlc/value.hpp"
