#pragma once

#include "catalog.hpp"
#include "characters.hpp"
#include "coset.hpp"
#include "error.hpp"
#include "fusion_qdim.hpp"
#include "io.hpp"
#include "lattice.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "orbifold.hpp"
#include "parallel.hpp"
#include "qseries.hpp"
#include "rational.hpp"
#include "twist.hpp"
