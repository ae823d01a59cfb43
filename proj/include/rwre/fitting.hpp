#ifndef RWRE_FITTING_HPP
#define RWRE_FITTING_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rwre/hittime.hpp"

namespace rwre {

struct DegenerateWindowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n_points = 0;
};

inline LinearFit least_squares(std::span<const double> x,
                               std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n)
    throw DegenerateWindowError("least_squares needs >= 2 matched points");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DegenerateWindowError("regressor has zero variance");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  f.n_points = n;
  return f;
}

enum class FitMode { FreeExponent, FixedExponent };

struct ExponentFit {
  double exponent = 0.0;   // gamma
  double prefactor = 0.0;  // multiplier of n^gamma
  double r_squared = 0.0;
  std::int64_t window_lo = 0;
  std::int64_t window_hi = 0;
  FitMode mode = FitMode::FreeExponent;
};

// Growth-law fit of log T(n) over n in [lo, hi]:
//   FreeExponent:  regress log log T(n) on log n; slope estimates gamma.
//   FixedExponent: regress log T(n) on n^gamma; slope estimates the
//                  prefactor (the identifiable quantity in ergodic regimes).
// Defaults: lo = n_max/10, hi = n_max. Throws DegenerateWindowError when
// the window holds fewer than 10 sites.
inline ExponentFit fit_growth(const LogHitProfile& prof, FitMode mode,
                              double gamma = 0.0, std::int64_t lo = -1,
                              std::int64_t hi = -1) {
  const std::int64_t n_max = prof.n_max();
  if (hi <= 0) hi = n_max;
  if (lo <= 0) lo = std::max<std::int64_t>(2, n_max / 10);
  hi = std::min(hi, n_max);
  if (hi - lo + 1 < 10)
    throw DegenerateWindowError("fit window holds fewer than 10 sites");

  std::vector<double> xs, ys;
  xs.reserve(static_cast<std::size_t>(hi - lo + 1));
  ys.reserve(xs.capacity());
  for (std::int64_t n = lo; n <= hi; ++n) {
    const double lt = prof.log_t[static_cast<std::size_t>(n)];
    if (mode == FitMode::FreeExponent) {
      if (!(lt > 0.0)) continue;  // log log undefined
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(std::log(lt));
    } else {
      xs.push_back(std::pow(static_cast<double>(n), gamma));
      ys.push_back(lt);
    }
  }
  if (xs.size() < 10)
    throw DegenerateWindowError("fit window holds fewer than 10 usable sites");
  const LinearFit f = least_squares(xs, ys);

  ExponentFit out;
  out.mode = mode;
  out.r_squared = f.r_squared;
  out.window_lo = lo;
  out.window_hi = hi;
  if (mode == FitMode::FreeExponent) {
    out.exponent = f.slope;
    out.prefactor = std::exp(f.intercept);
  } else {
    out.exponent = gamma;
    out.prefactor = f.slope;
  }
  return out;
}

}  // namespace rwre

#endif
