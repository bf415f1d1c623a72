#pragma once

#include "corrpic/correlation.hpp"
#include "corrpic/errors.hpp"
#include "corrpic/linalg.hpp"
#include "corrpic/models.hpp"
#include "corrpic/quadrature.hpp"
#include "corrpic/random.hpp"
#include "corrpic/solvers.hpp"
#include "corrpic/ull.hpp"
#include "corrpic/validation.hpp"
