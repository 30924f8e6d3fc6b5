#pragma once

// Scalar choices for the templated numeric core. Double is the default;
// the extended mode uses IEEE binary128 emulation, needed because fifth
// derivatives of high-degree slice roots lose too many digits in double.

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace lbd {

using quad = boost::multiprecision::cpp_bin_float_quad;

enum class Precision { Double, Extended };

}  // namespace lbd
