#pragma once

namespace adlab {

inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kPi = 3.14159265358979323846;

// (1/sqrt(2 pi)) * integral_delta^inf exp(-u^2/2) du.
double normal_tail(double delta);

// log of normal_tail, finite for arbitrarily large delta.
double log_normal_tail(double delta);

// log(e^a + e^b) without overflow.
double log_add_exp(double a, double b);

}  // namespace adlab
