#pragma once

#include <cmath>
#include <ostream>

// Absolute-tolerance comparison for doctest checks: CHECK(x == near(v, tol)).
namespace testutil {

struct Near {
  double value;
  double tol;
};

inline Near near(double value, double tol) { return {value, tol}; }

inline bool operator==(double lhs, const Near& rhs) {
  return std::fabs(lhs - rhs.value) <= rhs.tol;
}

inline std::ostream& operator<<(std::ostream& os, const Near& n) {
  return os << n.value << " +/- " << n.tol;
}

}  // namespace testutil

using testutil::near;
