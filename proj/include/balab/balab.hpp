#pragma once

#include "balab/core/errors.hpp"
#include "balab/core/hnf.hpp"
#include "balab/core/linalg.hpp"
#include "balab/core/scalar.hpp"
#include "balab/core/shells.hpp"
#include "balab/dynamics/criteria.hpp"
#include "balab/dynamics/flow.hpp"
#include "balab/dynamics/orbit.hpp"
#include "balab/forms/classify.hpp"
#include "balab/forms/statistics.hpp"
#include "balab/forms/system.hpp"
#include "balab/fractal/boxcount.hpp"
#include "balab/fractal/tessellation.hpp"
#include "balab/fractal/tree.hpp"
