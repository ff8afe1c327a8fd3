#pragma once

#include "guessrisk/bounds.hpp"
#include "guessrisk/construct.hpp"
#include "guessrisk/dist.hpp"
#include "guessrisk/entropy.hpp"
#include "guessrisk/errors.hpp"
#include "guessrisk/gaussian.hpp"
#include "guessrisk/guessing.hpp"
#include "guessrisk/io.hpp"
#include "guessrisk/sweep.hpp"
