#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace hybridpir {

// Exact rational used for storage ratios, costs and hull geometry.
using Rational = boost::rational<std::int64_t>;

// "7/5", or "2" when the denominator is one.
std::string to_string(const Rational& value);

// Accepts "a/b", "a" or "-a/b". Throws ParseError.
Rational parse_rational(std::string_view text);

double to_double(const Rational& value);

// 1 + ratio + ratio^2 + ... + ratio^(terms-1).
Rational geometric_sum(const Rational& ratio, int terms);

std::int64_t binomial(int n, int k);

}  // namespace hybridpir
