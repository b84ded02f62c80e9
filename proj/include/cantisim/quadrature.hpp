#pragma once

#include <array>
#include <cmath>
#include <concepts>

namespace cantisim {

// 16-node Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 16> kGL16Nodes = {
    -0.9894009349916499326,  -0.94457502307323257608, -0.86563120238783174388,
    -0.7554044083550030339,  -0.61787624440264374845, -0.45801677765722738634,
    -0.28160355077925891323, -0.095012509837637440185, 0.095012509837637440185,
    0.28160355077925891323,  0.45801677765722738634,   0.61787624440264374845,
    0.7554044083550030339,   0.86563120238783174388,   0.94457502307323257608,
    0.9894009349916499326};

inline constexpr std::array<double, 16> kGL16Weights = {
    0.027152459411754094852, 0.062253523938647892863, 0.09515851168249278481,
    0.12462897125553387205,  0.14959598881657673208,  0.16915651939500253819,
    0.18260341504492358887,  0.18945061045506849629,  0.18945061045506849629,
    0.18260341504492358887,  0.16915651939500253819,  0.14959598881657673208,
    0.12462897125553387205,  0.09515851168249278481,  0.062253523938647892863,
    0.027152459411754094852};

// Composite 16-node Gauss-Legendre over [x0, x1] split into equal panels.
template <std::invocable<double> F>
double composite_gl(F&& f, double x0, double x1, int panels) {
  const double w = (x1 - x0) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = x0 + p * w;
    double s = 0.0;
    for (int i = 0; i < 16; ++i)
      s += kGL16Weights[i] * f(a + 0.5 * w * (kGL16Nodes[i] + 1.0));
    total += 0.5 * w * s;
  }
  return total;
}

// Panel count that resolves products of oscillatory modes with wavenumber up
// to lambda_max on an interval of the given length (>= ~10 nodes per period).
inline int panels_for(double lambda_max, double length) {
  const int n = static_cast<int>(std::ceil(length * lambda_max * 1.3));
  return n < 10 ? 10 : n;
}

}  // namespace cantisim
