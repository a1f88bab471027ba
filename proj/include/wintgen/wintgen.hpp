#pragma once

#include "wintgen/chart.hpp"
#include "wintgen/chart_spec.hpp"
#include "wintgen/conformal.hpp"
#include "wintgen/decomposition.hpp"
#include "wintgen/errors.hpp"
#include "wintgen/expression.hpp"
#include "wintgen/fuzz.hpp"
#include "wintgen/gaussparam.hpp"
#include "wintgen/immersion.hpp"
#include "wintgen/jet.hpp"
#include "wintgen/linalg.hpp"
#include "wintgen/pointwise.hpp"
#include "wintgen/zoo.hpp"
