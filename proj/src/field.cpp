#include "pulsefield/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pulsefield {

Signal Signal::from_values(int grid_bits, Eigen::VectorXd values) {
  if (values.size() != (Index{1} << grid_bits) + 1) {
    throw ResolutionError("signal needs 2^grid_bits + 1 values");
  }
  Signal out;
  out.grid_bits = grid_bits;
  out.values = std::move(values);
  return out;
}

namespace {

constexpr Index kChunk = 4096;

// Grid indices that may lie in the closed support [x - r, x + r], padded by
// one cell; the pulse itself vanishes outside its support.
IndexRange support_cells(double center, double radius, int grid_bits, Index last) {
  const double scale = std::ldexp(1.0, grid_bits);
  const double lo = std::floor((center - radius) * scale) - 1.0;
  const double hi = std::ceil((center + radius) * scale) + 1.0;
  const auto clamp = [&](double v) {
    return static_cast<Index>(std::clamp(v, 0.0, static_cast<double>(last)));
  };
  if (hi < 0.0 || lo > static_cast<double>(last)) return {0, 0};
  return {clamp(lo), clamp(hi) + 1};
}

}  // namespace

Signal evaluate_field(std::shared_ptr<const Realization> real, int grid_bits,
                      LevelRange j_range) {
  if (!real) throw DomainError("evaluate_field: null realization");
  if (j_range.lo < 0 || j_range.hi > real->j_max() || j_range.lo > j_range.hi) {
    throw WindowError("evaluate_field: level range outside 0..jmax");
  }
  if (grid_bits < j_range.hi + 2) {
    std::ostringstream out;
    out << "evaluate_field: grid too coarse, need grid_bits >= " << j_range.hi + 2 << " (got "
        << grid_bits << ")";
    throw ResolutionError(out.str());
  }
  if (grid_bits > 28) throw ResolutionError("evaluate_field: grid_bits above 28");

  const Realization& r = *real;
  const PulseKind kind = r.params().pulse;
  const Index last = Index{1} << grid_bits;
  Eigen::VectorXd values = Eigen::VectorXd::Zero(last + 1);
  const Eigen::VectorXd& amp = r.amplitude();
  const Eigen::VectorXd& dil = r.dilation();
  const Eigen::VectorXd& rad = r.radius();
  const Eigen::VectorXd& xs = r.x();

  parallel_for(last + 1, kChunk, [&](Index begin, Index end) {
    const double left = std::ldexp(static_cast<double>(begin), -grid_bits);
    const double right = std::ldexp(static_cast<double>(end - 1), -grid_bits);
    const double mid = 0.5 * (left + right);
    const double half = 0.5 * (right - left) + std::ldexp(2.0, -grid_bits);
    std::vector<Index> pulses;
    for (int j = j_range.lo; j <= j_range.hi; ++j) {
      const IndexRange level = r.level(j);
      if (j == 0) {
        for (Index n = level.begin; n < level.end; ++n) pulses.push_back(n);
        continue;
      }
      const auto near = r.level_candidates(j, mid, half + Realization::max_radius(j));
      pulses.insert(pulses.end(), near.begin(), near.end());
    }
    std::sort(pulses.begin(), pulses.end());
    for (Index n : pulses) {
      const IndexRange cells = support_cells(xs[n], rad[n], grid_bits, last);
      const Index lo = std::max(cells.begin, begin);
      const Index hi = std::min(cells.end, end);
      for (Index i = lo; i < hi; ++i) {
        const double x = std::ldexp(static_cast<double>(i), -grid_bits);
        values[i] += amp[n] * pulse_value(kind, dil[n] * (x - xs[n]));
      }
    }
  });

  Signal out;
  out.grid_bits = grid_bits;
  out.values = std::move(values);
  out.j_range = j_range;
  out.tail_estimate = tail_estimate(r.params(), std::max(2, j_range.hi));
  out.source = std::move(real);
  return out;
}

Signal evaluate_field(std::shared_ptr<const Realization> real, int grid_bits) {
  const int j_max = real ? real->j_max() : 0;
  return evaluate_field(std::move(real), grid_bits, LevelRange{0, j_max});
}

double evaluate_field_direct(const Realization& real, double x) {
  const PulseKind kind = real.params().pulse;
  const Eigen::VectorXd& amp = real.amplitude();
  const Eigen::VectorXd& dil = real.dilation();
  const Eigen::VectorXd& xs = real.x();
  double sum = 0.0;
  for (Index n = 0; n < real.size(); ++n) sum += amp[n] * pulse_value(kind, dil[n] * (x - xs[n]));
  return sum;
}

double tail_estimate(const ModelParams& params, int j_trunc) {
  if (j_trunc < 2) throw DomainError("tail_estimate: j_trunc must be >= 2");
  const double ae = params.alpha * params.eta;
  // j^2 2^{-ae j (1 - eps_j)} = j^{2 + alpha} 2^{-ae j}; peak near j = (2 + alpha) / (ae ln 2).
  const double peak = (2.0 + params.alpha) / (ae * std::log(2.0));
  double sum = 0.0;
  for (int j = j_trunc + 1; j < 1'000'000; ++j) {
    const double jd = static_cast<double>(j);
    const double term = jd * jd * std::exp2(-ae * jd * (1.0 - eps_level(j, params.eta)));
    sum += term;
    if (jd > peak && term < 1e-18 * sum) break;
  }
  return Pulse::of(params.pulse).sup_norm * sum;
}

double field_lipschitz_sum(const Realization& real) {
  return real.amplitude().dot(real.dilation());
}

}  // namespace pulsefield
