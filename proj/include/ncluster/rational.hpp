#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace ncluster {

// Exact arbitrary-precision arithmetic used throughout the engine.
// cpp_rational keeps values in lowest terms with a positive denominator.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

bool is_integer(const Rational& q);

// x^e for any integer e; e < 0 inverts (x must be nonzero then).
// Guarded against absurdly large exponents (resource_error).
Rational rational_pow(const Rational& x, const Int& e);

}  // namespace ncluster
