#pragma once

#include <string>
#include <vector>

namespace sphstab {

/// Parses a polynomial in t such as "(t+1)*(t-s)" or "t^2 - 0.5*t" into
/// monomial coefficients. The symbol s is replaced by `s`. Throws InputError.
std::vector<double> parse_polynomial(const std::string& text, double s);

}  // namespace sphstab
