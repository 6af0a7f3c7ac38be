#pragma once

#include <string>

#include "bochner/field.hpp"

namespace bochner {

/// Small field language for the eval command: a sum of terms such as
/// "2*sinx*dx_vec - cosy*dy_vec". Factors are numbers, x, y, z and
/// sin/cos of a coordinate (sinx, cosy, ...); each term carries at most one
/// basis element, dx_vec.. for vector fields or dx.. for 1-forms. A spec with
/// no basis element is a function.
Field parse_field_spec(const std::string& spec, int dim, bool vector);

}  // namespace bochner
