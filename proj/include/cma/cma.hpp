#pragma once

// Everything at once.

#include "cma/arith/bigint.hpp"
#include "cma/arith/fp_poly.hpp"
#include "cma/arith/interval.hpp"
#include "cma/arith/lattice.hpp"
#include "cma/arith/matrix.hpp"
#include "cma/arith/poly.hpp"
#include "cma/arith/sturm.hpp"
#include "cma/error.hpp"
#include "cma/etale/algebra.hpp"
#include "cma/etale/irreducibility.hpp"
#include "cma/galois/permutation.hpp"
#include "cma/galois/places.hpp"
#include "cma/groups/automorphisms.hpp"
#include "cma/groups/conjugator.hpp"
#include "cma/groups/matrix_groups.hpp"
#include "cma/io/json.hpp"
#include "cma/pipeline/pipeline.hpp"
#include "cma/torus/torus.hpp"
#include "cma/units/embeddings.hpp"
#include "cma/units/units.hpp"
#include "cma/units/valuation.hpp"
