#include "radialwave/core.hpp"

#include <string>

namespace radialwave {

ModelParams make_params(int d, int p) {
  require(d >= 3 && d % 2 == 1, ErrorKind::InvalidParams, "d must be an odd integer >= 3, got " + std::to_string(d));
  require(p >= 3 && p % 2 == 1, ErrorKind::InvalidParams, "p must be an odd integer >= 3, got " + std::to_string(p));
  ModelParams m;
  m.d = d;
  m.p = p;
  m.s_p = d / 2.0 - 2.0 / (p - 1);
  m.q_p = d * (p - 1) / 2.0;
  m.beta = ((d - 2) / 2.0) * (p - double(d + 2) / (d - 2));
  return m;
}

}  // namespace radialwave
