#pragma once

// Everything except the CLI driver.

#include "dilatree/dilation.hpp"
#include "dilatree/gadget.hpp"
#include "dilatree/geometry.hpp"
#include "dilatree/io.hpp"
#include "dilatree/partition.hpp"
#include "dilatree/solver.hpp"
#include "dilatree/svg.hpp"
#include "dilatree/verify.hpp"
#include "dilatree/witness.hpp"
