#pragma once

#include "nullctl/certify.hpp"
#include "nullctl/error.hpp"
#include "nullctl/expression.hpp"
#include "nullctl/gronwall.hpp"
#include "nullctl/linalg.hpp"
#include "nullctl/matrix.hpp"
#include "nullctl/ode.hpp"
#include "nullctl/quadrature.hpp"
#include "nullctl/serialize.hpp"
#include "nullctl/simulate.hpp"
#include "nullctl/synthesize.hpp"
#include "nullctl/vector_field.hpp"
