#pragma once

// Umbrella header: exact rational polytope norms, partial isometries
// between them, cyclic extension machinery, shift sequences, and JSON
// serialization for all of it.

#include "errors.hpp"
#include "extension.hpp"
#include "json_io.hpp"
#include "linalg.hpp"
#include "lp.hpp"
#include "partiso.hpp"
#include "polytope.hpp"
#include "rational.hpp"
#include "shiftspace.hpp"
#include "space.hpp"
