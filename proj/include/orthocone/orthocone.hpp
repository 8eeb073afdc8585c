#pragma once

#include "orthocone/errors.hpp"
#include "orthocone/specfun.hpp"
#include "orthocone/quadrature.hpp"
#include "orthocone/gram.hpp"
#include "orthocone/gfun.hpp"
#include "orthocone/cones.hpp"
#include "orthocone/simplex.hpp"
#include "orthocone/gauss.hpp"
#include "orthocone/rng.hpp"
#include "orthocone/mc.hpp"
