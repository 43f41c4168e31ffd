#include "corrdet/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace corrdet {

namespace {

struct Panel {
  double a, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

void refine(const std::function<double(double)>& f, const Panel& p, double tol, int depth,
            QuadratureResult& out) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  out.evaluations += 2;
  const double left = simpson(p.a, m, p.fa, flm, p.fm);
  const double right = simpson(m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    out.value += left + right + delta / 15.0;
    out.error_estimate += std::abs(delta) / 15.0;
    return;
  }
  refine(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1, out);
  refine(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1, out);
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol, int max_depth) {
  if (!(tol > 0.0)) throw std::invalid_argument("adaptive_simpson: tolerance must be positive");
  QuadratureResult out;
  if (a == b) return out;
  if (b < a) {
    out = adaptive_simpson(f, b, a, tol, max_depth);
    out.value = -out.value;
    return out;
  }
  // Pre-split into a few panels so a narrow feature cannot hide between the
  // three initial nodes.
  constexpr int kPanels = 8;
  const double h = (b - a) / kPanels;
  for (int k = 0; k < kPanels; ++k) {
    const double lo = a + k * h;
    const double hi = (k + 1 == kPanels) ? b : lo + h;
    const double fa = f(lo);
    const double fm = f(0.5 * (lo + hi));
    const double fb = f(hi);
    out.evaluations += 3;
    refine(f, {lo, hi, fa, fm, fb, simpson(lo, hi, fa, fm, fb)}, tol / kPanels, max_depth, out);
  }
  return out;
}

}  // namespace corrdet
