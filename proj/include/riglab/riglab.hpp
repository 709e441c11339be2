#pragma once

#include "riglab/core.hpp"
#include "riglab/exact.hpp"
#include "riglab/polytope.hpp"
#include "riglab/hull.hpp"
#include "riglab/generate.hpp"
#include "riglab/rigidity.hpp"
#include "riglab/orientation.hpp"
#include "riglab/inversions.hpp"
#include "riglab/decompose.hpp"
#include "riglab/audit.hpp"
#include "riglab/off_io.hpp"
#include "riglab/serialize.hpp"
