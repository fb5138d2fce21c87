#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "doctest.h"

namespace oracle {

using cplx = std::complex<double>;

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace oracle

#define CHECK_REL(a, b, tol) CHECK(oracle::rel((a), (b)) < (tol))
