#pragma once

#include "pulsefield/params.hpp"
#include "pulsefield/point_process.hpp"

#include <Eigen/Core>

#include <initializer_list>
#include <memory>

namespace testing {

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

/// Realization from explicit arrays; c defaults to 1, 2, 3, ...
inline pulsefield::Realization manual(const pulsefield::ModelParams& p, Eigen::VectorXd b, Eigen::VectorXd x,
                                      Eigen::VectorXd c = {}) {
  if (c.size() == 0) c = Eigen::VectorXd::LinSpaced(b.size(), 1.0, static_cast<double>(b.size()));
  return pulsefield::Realization::from_arrays(p, std::move(c), std::move(b), std::move(x));
}

inline std::shared_ptr<const pulsefield::Realization> shared(pulsefield::Realization r) {
  return std::make_shared<const pulsefield::Realization>(std::move(r));
}

/// b such that b^{1/eta} equals the given dilation.
inline double b_for_dilation(double dilation, double eta) { return std::pow(dilation, eta); }

}  // namespace testing
