#include "dsca/envelope.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dsca/rng.hpp"

namespace dsca {
namespace {

constexpr int kGridPoints = 129;

// Minimize a 1-D function on [lo, hi]: coarse grid bracketing, then
// golden-section refinement of the best bracket. Returns the minimizer.
double minimize_scalar(const std::function<double(double)>& f, double lo,
                       double hi, double tol) {
  if (hi <= lo) return lo;
  double best_x = lo, best_v = f(lo);
  const double h = (hi - lo) / (kGridPoints - 1);
  for (int k = 1; k < kGridPoints; ++k) {
    double xk = lo + k * h;
    double v = f(xk);
    if (v < best_v) {
      best_v = v;
      best_x = xk;
    }
  }
  double a = std::max(lo, best_x - h);
  double b = std::min(hi, best_x + h);

  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Minimize over a box; dim 1 uses the scalar routine directly, higher dims
// run cyclic coordinate descent on top of it.
Eigen::VectorXd minimize_box(const ScalarField& f, const EnvelopeBox& box,
                             double tol) {
  const int d = static_cast<int>(box.lo.size());
  if (d == 1) {
    double x = minimize_scalar(
        [&](double v) {
          Eigen::VectorXd p(1);
          p(0) = v;
          return f(p);
        },
        box.lo(0), box.hi(0), tol);
    Eigen::VectorXd out(1);
    out(0) = x;
    return out;
  }
  if (d > 3)
    throw std::invalid_argument("envelope: solver supports dimension <= 3");

  Eigen::VectorXd x = 0.5 * (box.lo + box.hi);
  for (int sweep = 0; sweep < 200; ++sweep) {
    double moved = 0.0;
    for (int c = 0; c < d; ++c) {
      double xc = minimize_scalar(
          [&](double v) {
            Eigen::VectorXd p = x;
            p(c) = v;
            return f(p);
          },
          box.lo(c), box.hi(c), tol);
      moved = std::max(moved, std::abs(xc - x(c)));
      x(c) = xc;
    }
    if (moved <= tol) break;
  }
  return x;
}

// Inner Moreau value at z: min_y f(y) + ||z-y||^2/(2t).
double inner_moreau(const ScalarField& f, double t, const Eigen::VectorXd& z,
                    const EnvelopeBox& box, double tol) {
  ScalarField obj = [&](const Eigen::VectorXd& y) {
    return f(y) + (z - y).squaredNorm() / (2.0 * t);
  };
  Eigen::VectorXd y = minimize_box(obj, box, tol);
  return obj(y);
}

Eigen::VectorXd outer_argmax(const ScalarField& f, const EnvelopeParams& p,
                             const Eigen::VectorXd& x, const EnvelopeBox& box,
                             double tol) {
  // Outer objective negated for the minimizer; strictly concave since s < t.
  ScalarField neg = [&](const Eigen::VectorXd& z) {
    return (x - z).squaredNorm() / (2.0 * p.s) -
           inner_moreau(f, p.t, z, box, tol);
  };
  return minimize_box(neg, box, tol);
}

}  // namespace

EnvelopeParams envelope_params_from_L(double L) {
  if (L <= 0.0) throw std::invalid_argument("envelope: L must be positive");
  return {2.0 / L, 1.0 / L};
}

EnvelopeBox envelope_box_1d(double lo, double hi) {
  EnvelopeBox b;
  b.lo = Eigen::VectorXd::Constant(1, lo);
  b.hi = Eigen::VectorXd::Constant(1, hi);
  return b;
}

double double_envelope_value(const ScalarField& f, const EnvelopeParams& p,
                             const Eigen::VectorXd& x, const EnvelopeBox& box,
                             double tol) {
  if (!(p.s > 0.0 && p.s < p.t))
    throw std::invalid_argument("envelope: need 0 < s < t");
  Eigen::VectorXd z = outer_argmax(f, p, x, box, tol);
  return inner_moreau(f, p.t, z, box, tol) - (x - z).squaredNorm() / (2.0 * p.s);
}

Eigen::VectorXd double_envelope_grad(const ScalarField& f, const EnvelopeParams& p,
                                     const Eigen::VectorXd& x,
                                     const EnvelopeBox& box, double tol) {
  if (!(p.s > 0.0 && p.s < p.t))
    throw std::invalid_argument("envelope: need 0 < s < t");
  Eigen::VectorXd z = outer_argmax(f, p, x, box, tol);
  return (z - x) / p.s;
}

double lipschitz_probe(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
    const EnvelopeBox& box, int n_samples, uint64_t seed) {
  if (n_samples < 2)
    throw std::invalid_argument("lipschitz_probe: need at least 2 samples");
  Rng rng(seed);
  const int d = static_cast<int>(box.lo.size());
  std::vector<Eigen::VectorXd> pts(n_samples);
  std::vector<Eigen::VectorXd> grads(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    Eigen::VectorXd p(d);
    for (int c = 0; c < d; ++c) p(c) = rng.next_uniform(box.lo(c), box.hi(c));
    pts[k] = p;
    grads[k] = grad(p);
  }
  double best = 0.0;
  for (int a = 0; a < n_samples; ++a)
    for (int b = a + 1; b < n_samples; ++b) {
      double dist = (pts[a] - pts[b]).norm();
      if (dist > 1e-12)
        best = std::max(best, (grads[a] - grads[b]).norm() / dist);
    }
  return best;
}

double double_envelope_value_1d(const std::function<double(double)>& f,
                                const EnvelopeParams& p, double x, double box_lo,
                                double box_hi, double tol) {
  Eigen::VectorXd xv(1);
  xv(0) = x;
  return double_envelope_value([&](const Eigen::VectorXd& v) { return f(v(0)); },
                               p, xv, envelope_box_1d(box_lo, box_hi), tol);
}

double double_envelope_grad_1d(const std::function<double(double)>& f,
                               const EnvelopeParams& p, double x, double box_lo,
                               double box_hi, double tol) {
  Eigen::VectorXd xv(1);
  xv(0) = x;
  return double_envelope_grad([&](const Eigen::VectorXd& v) { return f(v(0)); },
                              p, xv, envelope_box_1d(box_lo, box_hi), tol)(0);
}

}  // namespace dsca
