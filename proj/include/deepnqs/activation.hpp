#pragma once

#include <string_view>

namespace deepnqs {

// Self-normalizing constants of the scaled exponential linear unit.
inline constexpr double kSeluScale = 1.0507009873554804934193349852946;
inline constexpr double kSeluAlpha = 1.6732632423543772848170429916717;

/// Scalar activation used by the mean-field recurrences and the real-weight
/// diagnostic networks. `Identity` exists for closed-form checks.
enum class Activation { Tanh, SeluReal, Identity };

double activate(Activation kind, double x);

/// Derivative of `activate`. For SeluReal the kink at 0 takes the x <= 0 branch.
double activate_derivative(Activation kind, double x);

/// Linear gain of the magnitude map at the origin: lim_{q->0} E[phi(sqrt(q) z)^2] / q.
/// Averages the squared one-sided slopes, so it is well defined at a kink.
double origin_gain(Activation kind);

double selu(double x);

std::string_view to_string(Activation kind);
Activation activation_from_string(std::string_view name);

}  // namespace deepnqs
