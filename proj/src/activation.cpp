#include "deepnqs/activation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace deepnqs {

double selu(double x) {
  return x > 0.0 ? kSeluScale * x : kSeluScale * kSeluAlpha * std::expm1(x);
}

double activate(Activation kind, double x) {
  switch (kind) {
    case Activation::Tanh: return std::tanh(x);
    case Activation::SeluReal: return selu(x);
    case Activation::Identity: return x;
  }
  return x;
}

double activate_derivative(Activation kind, double x) {
  switch (kind) {
    case Activation::Tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Activation::SeluReal:
      return x > 0.0 ? kSeluScale : kSeluScale * kSeluAlpha * std::exp(x);
    case Activation::Identity: return 1.0;
  }
  return 1.0;
}

double origin_gain(Activation kind) {
  switch (kind) {
    case Activation::Tanh:
    case Activation::Identity: return 1.0;
    case Activation::SeluReal: {
      const double left = kSeluScale * kSeluAlpha;
      return 0.5 * (kSeluScale * kSeluScale + left * left);
    }
  }
  return 1.0;
}

std::string_view to_string(Activation kind) {
  switch (kind) {
    case Activation::Tanh: return "tanh";
    case Activation::SeluReal: return "selu";
    case Activation::Identity: return "identity";
  }
  return "unknown";
}

Activation activation_from_string(std::string_view name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "selu") return Activation::SeluReal;
  if (name == "identity") return Activation::Identity;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

}  // namespace deepnqs
