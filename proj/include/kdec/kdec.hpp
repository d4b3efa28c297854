#pragma once

#include "kdec/grid.hpp"
#include "kdec/systems.hpp"
#include "kdec/kinetic.hpp"
#include "kdec/stencil.hpp"
#include "kdec/limiter.hpp"
#include "kdec/quadrature.hpp"
#include "kdec/transport.hpp"
#include "kdec/mood.hpp"
#include "kdec/dec.hpp"
#include "kdec/fourier.hpp"
#include "kdec/cases.hpp"
#include "kdec/io.hpp"
#include "kdec/threads.hpp"
