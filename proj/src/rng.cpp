#include "disjlab/rng.hpp"

#include <cmath>

namespace disjlab {

double RandomStream::exponential() {
  // -log(1-U) with U in [0,1); log1p keeps precision for small U.
  return -std::log1p(-next_double53());
}

double RandomStream::exp2_local(double x) { return std::exp2(x); }

}  // namespace disjlab
