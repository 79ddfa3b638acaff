#pragma once

#include <Eigen/Core>

#include "oneshot/network.hpp"

namespace oneshot::detail {

template <typename Derived>
void activate_inplace(Eigen::MatrixBase<Derived>& z, Activation a) {
  switch (a) {
    case Activation::linear: break;
    case Activation::relu: z = z.cwiseMax(0.0); break;
    case Activation::tanh: z = z.array().tanh().matrix(); break;
    case Activation::sigmoid: z = (1.0 / (1.0 + (-z.array()).exp())).matrix(); break;
  }
}

/// Elementwise derivative of the activation given pre-activations `z`.
template <typename Derived>
auto activation_derivative(const Eigen::MatrixBase<Derived>& z, Activation a) {
  using Plain = typename Derived::PlainObject;
  Plain out(z.rows(), z.cols());
  switch (a) {
    case Activation::linear: out.setOnes(); break;
    case Activation::relu: out = (z.array() > 0.0).template cast<double>().matrix(); break;
    case Activation::tanh: out = (1.0 - z.array().tanh().square()).matrix(); break;
    case Activation::sigmoid: {
      const auto s = (1.0 / (1.0 + (-z.array()).exp())).eval();
      out = (s * (1.0 - s)).matrix();
      break;
    }
  }
  return out;
}

}  // namespace oneshot::detail
