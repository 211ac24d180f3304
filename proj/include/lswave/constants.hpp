#pragma once

#include <complex>

namespace lswave {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbarc = 197.3269804;  // MeV fm

inline constexpr double deg2rad(double deg) { return deg * pi / 180.0; }

inline constexpr cplx I{0.0, 1.0};

}  // namespace lswave
