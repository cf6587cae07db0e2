#pragma once

// Umbrella header for the whole toolkit.

#include "hardylab/algebraic.hpp"
#include "hardylab/common.hpp"
#include "hardylab/criticality.hpp"
#include "hardylab/field.hpp"
#include "hardylab/functionals.hpp"
#include "hardylab/grid.hpp"
#include "hardylab/magnetic.hpp"
#include "hardylab/minimize.hpp"
#include "hardylab/params.hpp"
#include "hardylab/profile.hpp"
#include "hardylab/records.hpp"
#include "hardylab/supersolution.hpp"
#include "hardylab/version.hpp"
