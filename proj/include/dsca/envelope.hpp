#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

namespace dsca {

// Parameters of the double proximal envelope
//   f_{t,s}(x) = sup_z inf_y { f(y) + ||z-y||^2/(2t) - ||x-z||^2/(2s) },
// with 0 < s < t.
struct EnvelopeParams {
  double t = 0.0;
  double s = 0.0;
};

// Coefficients matching a target gradient Lipschitz constant L:
// t = 2/L, s = 1/L (so 1/(2t) = L/4 and 1/(2s) = L/2).
EnvelopeParams envelope_params_from_L(double L);

using ScalarField = std::function<double(const Eigen::VectorXd&)>;

// Working box restricting the inner/outer extremizations; coercivity keeps
// the relevant extremizers inside a compact set.
struct EnvelopeBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

EnvelopeBox envelope_box_1d(double lo, double hi);

// Numeric evaluation of the double envelope. The outer problem is strictly
// concave for s < t; the inner problem is handled by grid bracketing plus
// golden-section refinement (cyclic per-coordinate for dim 2..3).
double double_envelope_value(const ScalarField& f, const EnvelopeParams& p,
                             const Eigen::VectorXd& x, const EnvelopeBox& box,
                             double tol = 1e-8);

// Gradient from the outer extremizer: (z*(x) - x)/s. Matches central finite
// differences of double_envelope_value.
Eigen::VectorXd double_envelope_grad(const ScalarField& f, const EnvelopeParams& p,
                                     const Eigen::VectorXd& x,
                                     const EnvelopeBox& box, double tol = 1e-8);

// Empirical Lipschitz estimate of a gradient field: max over sampled pairs
// of ||g(a)-g(b)||/||a-b||.
double lipschitz_probe(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
    const EnvelopeBox& box, int n_samples, uint64_t seed);

// Convenience 1-D wrappers.
double double_envelope_value_1d(const std::function<double(double)>& f,
                                const EnvelopeParams& p, double x, double box_lo,
                                double box_hi, double tol = 1e-8);
double double_envelope_grad_1d(const std::function<double(double)>& f,
                               const EnvelopeParams& p, double x, double box_lo,
                               double box_hi, double tol = 1e-8);

}  // namespace dsca
