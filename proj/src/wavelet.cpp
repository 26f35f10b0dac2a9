#include "pulsefield/wavelet.hpp"

#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pulsefield {

namespace {

constexpr int kPanelsPerPiece = 8;  // 8 x 16 = 128 nodes per smooth piece

}  // namespace

double analyzing_wavelet_eval(double u) {
  if (std::isnan(u)) throw DomainError("analyzing_wavelet_eval: NaN argument");
  return analyzing_wavelet(u);
}

double AnalyzingWavelet::pulse_overlap(PulseKind pulse) {
  const auto& rule = detail::gauss16();
  const auto f = [pulse](double u) { return pulse_value(pulse, u) * analyzing_wavelet(u); };
  return rule.integrate(f, -1.0, 0.0, 64) + rule.integrate(f, 0.0, 1.0, 64);
}

void AnalyzingWavelet::check(PulseKind pulse) {
  const auto& rule = detail::gauss16();
  const double mean = rule.integrate([](double u) { return analyzing_wavelet(u); }, -1.0, 1.0, 16);
  if (std::abs(mean) > 1e-12) throw DomainError("analyzing wavelet does not have zero integral");
  if (std::abs(pulse_overlap(pulse)) < 1e-3) {
    throw DomainError("analyzing wavelet is orthogonal to the pulse profile");
  }
}

std::string_view to_string(CwtMethod method) noexcept {
  return method == CwtMethod::signal_quadrature ? "signal_quadrature" : "pulse_sum";
}

Eigen::VectorXd cwt_positions(int m) {
  const Index count = (Index{4} << m) - 7;  // k = 4 .. 4 * 2^m - 4
  if (count <= 0) return {};
  Eigen::VectorXd t(count);
  for (Index k = 0; k < count; ++k) t[k] = std::ldexp(static_cast<double>(k + 4), -m - 2);
  return t;
}

double pulse_coefficient(const Realization& real, Index n, double s, double t) {
  if (!(s > 0.0)) throw DomainError("pulse_coefficient: scale must be positive");
  const double center = real.x()[n];
  const double radius = real.radius()[n];
  const double dil = real.dilation()[n];
  const double a = std::max(center - radius, t - s);
  const double b = std::min(center + radius, t + s);
  if (!(a < b)) return 0.0;

  const PulseKind kind = real.params().pulse;
  const auto f = [&](double x) {
    return pulse_value(kind, dil * (x - center)) * analyzing_wavelet((x - t) / s);
  };
  const auto& rule = detail::gauss16();
  double integral = 0.0;
  if (a < center && center < b) {
    integral = rule.integrate(f, a, center, kPanelsPerPiece) +
               rule.integrate(f, center, b, kPanelsPerPiece);
  } else {
    integral = rule.integrate(f, a, b, kPanelsPerPiece);
  }
  return integral / std::sqrt(s);
}

double cwt_pulse_sum(const Realization& real, double s, double t, LevelRange j_range) {
  if (!(s > 0.0)) throw DomainError("cwt_pulse_sum: scale must be positive");
  if (j_range.lo < 0 || j_range.hi > real.j_max()) {
    throw WindowError("cwt_pulse_sum: level range outside 0..jmax");
  }
  std::vector<Index> pulses;
  for (int j = j_range.lo; j <= j_range.hi; ++j) {
    if (j == 0) {
      const IndexRange level = real.level(0);
      for (Index n = level.begin; n < level.end; ++n) pulses.push_back(n);
      continue;
    }
    const auto near = real.level_candidates(j, t, s + Realization::max_radius(j));
    pulses.insert(pulses.end(), near.begin(), near.end());
  }
  std::sort(pulses.begin(), pulses.end());
  double sum = 0.0;
  for (Index n : pulses) sum += real.amplitude()[n] * pulse_coefficient(real, n, s, t);
  return sum;
}

CwtGrid cwt_signal_grid(const Signal& signal, const AnalyzingWavelet& wavelet, int m_lo, int m_hi) {
  if (m_lo < 0 || m_lo > m_hi) throw DomainError("cwt_signal_grid: need 0 <= m_lo <= m_hi");
  if (m_hi > signal.grid_bits - 4) {
    std::ostringstream out;
    out << "cwt_signal_grid: scale 2^-" << m_hi << " too fine for grid 2^-" << signal.grid_bits
        << ", need m_hi <= " << signal.grid_bits - 4;
    throw ResolutionError(out.str());
  }
  CwtGrid grid;
  grid.method = CwtMethod::signal_quadrature;
  grid.quadrature_order = 1 << (signal.grid_bits - m_hi);
  const double h = signal.step();
  for (int m = m_lo; m <= m_hi; ++m) {
    CwtScale scale;
    scale.m = m;
    scale.s = std::ldexp(1.0, -m);
    scale.t = cwt_positions(m);
    const Index half = Index{1} << (signal.grid_bits - m);
    Eigen::ArrayXd u = Eigen::ArrayXd::LinSpaced(2 * half + 1, -1.0, 1.0);
    Eigen::ArrayXd base = u.unaryExpr([&](double v) { return wavelet(v); });
    Eigen::ArrayXd correction = (1.0 - u.square()).square();
    const double kappa = base.sum() / correction.sum();
    const Eigen::VectorXd weights = ((base - kappa * correction) * h).matrix();
    const double norm = 1.0 / std::sqrt(scale.s);

    scale.w.resize(scale.t.size());
    parallel_for(scale.t.size(), 256, [&](Index begin, Index end) {
      for (Index k = begin; k < end; ++k) {
        const Index center = (k + 4) * (half / 4);
        scale.w[k] = norm * signal.values.segment(center - half, 2 * half + 1).dot(weights);
      }
    });
    grid.scales.push_back(std::move(scale));
  }
  return grid;
}

CwtGrid cwt_pulse_grid(const Realization& real, int m_lo, int m_hi, LevelRange j_range) {
  if (m_lo < 0 || m_lo > m_hi) throw DomainError("cwt_pulse_grid: need 0 <= m_lo <= m_hi");
  CwtGrid grid;
  grid.method = CwtMethod::pulse_sum;
  grid.quadrature_order = 16 * kPanelsPerPiece;
  for (int m = m_lo; m <= m_hi; ++m) {
    CwtScale scale;
    scale.m = m;
    scale.s = std::ldexp(1.0, -m);
    scale.t = cwt_positions(m);
    scale.w.resize(scale.t.size());
    parallel_for(scale.t.size(), 64, [&](Index begin, Index end) {
      for (Index k = begin; k < end; ++k) scale.w[k] = cwt_pulse_sum(real, scale.s, scale.t[k], j_range);
    });
    grid.scales.push_back(std::move(scale));
  }
  return grid;
}

std::vector<ScaleValue> lattice_sup(const CwtGrid& grid) {
  std::vector<ScaleValue> out;
  for (const auto& scale : grid.scales) {
    if (scale.w.size() == 0) continue;
    out.push_back({scale.s, scale.w.cwiseAbs().maxCoeff()});
  }
  return out;
}

UniformFit uniform_decay_fit(const CwtGrid& grid, std::optional<double> log_power) {
  auto sups = lattice_sup(grid);
  std::erase_if(sups, [](const ScaleValue& p) { return !(p.value > 0.0); });
  if (sups.size() < 5) {
    throw InsufficientDataError("uniform_decay_fit: need at least 5 scales with nonzero coefficients");
  }
  UniformFit out;
  out.fit = fit_power_log(sups, log_power);
  out.h_uniform = out.fit.exponent - 0.5;
  return out;
}

}  // namespace pulsefield
