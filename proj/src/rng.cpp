#include "pulsefield/rng.hpp"

#include <cmath>

namespace pulsefield {

double CounterRng::exponential() { return -std::log(uniform_open0()); }

long poisson_by_gaps(CounterRng& rng, double mean) {
  long count = 0;
  double arrival = rng.exponential();
  while (arrival <= mean) {
    ++count;
    arrival += rng.exponential();
  }
  return count;
}

}  // namespace pulsefield
