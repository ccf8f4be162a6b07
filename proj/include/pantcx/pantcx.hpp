#pragma once

#include "pantcx/errors.hpp"
#include "pantcx/graph.hpp"
#include "pantcx/canon.hpp"
#include "pantcx/moves.hpp"
#include "pantcx/surgery.hpp"
#include "pantcx/enumerate.hpp"
#include "pantcx/complex.hpp"
#include "pantcx/homology.hpp"
#include "pantcx/presentation.hpp"
#include "pantcx/maps.hpp"
