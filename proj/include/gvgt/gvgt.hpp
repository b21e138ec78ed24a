#pragma once

// Umbrella header: distance-guaranteed linear codes by conditional
// derandomization, their reduction to selective test families, and
// non-adaptive group-testing schemes on top.

#include "gvgt/field.hpp"
#include "gvgt/gray.hpp"
#include "gvgt/gvcode.hpp"
#include "gvgt/numeric.hpp"
#include "gvgt/params.hpp"
#include "gvgt/scheme.hpp"
#include "gvgt/ssf.hpp"
#include "gvgt/util.hpp"
