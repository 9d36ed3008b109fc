#pragma once

#include "rpiso/circle_analysis.hpp"
#include "rpiso/density.hpp"
#include "rpiso/error.hpp"
#include "rpiso/geometry.hpp"
#include "rpiso/io.hpp"
#include "rpiso/measures.hpp"
#include "rpiso/shapes.hpp"
#include "rpiso/shooting.hpp"
#include "rpiso/symmetrization.hpp"
#include "rpiso/verify.hpp"
