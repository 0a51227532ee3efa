#pragma once

#include "ddc/types.hpp"

namespace ddc {

// psi(phi) = log E[e^{phi X_1}], phi >= 0.
double laplace_exponent(const ModelSpec& model, double phi);
double laplace_exponent_deriv(const ModelSpec& model, double phi);

// Right-inverse Phi(r) = sup{phi > 0 : psi(phi) = r}. Closed form seeds a
// safeguarded Newton solve; the result satisfies psi(Phi(r)) = r to 1e-12
// relative.
double phi_inverse(const ModelSpec& model, double r);

// Per-(model, r) constants behind the closed-form scale functions.
struct ScaleParams {
    double r = 0.0;
    double phi_r = 0.0;    // Phi(r)
    double zeta = 0.0;     // CL only: second root of psi = r, zeta < Phi(r)
    double bm_rate = 0.0;  // BM only: sqrt(mu^2 + 2 r sigma^2)/sigma^2
    double dpsi_phi = 0.0;  // CL: psi'(Phi(r))
    double dpsi_zeta = 0.0; // CL: psi'(zeta)
};

ScaleParams scale_params(const ModelSpec& model, double r);

// Scale-function evaluator bound to one (model, r). All members are const;
// instances are freely shareable across threads.
class ScaleFns {
  public:
    ScaleFns(const ModelSpec& model, double r);

    // W^{(r)}(x) and its first two derivatives. W(x) = 0 for x < 0 by the
    // standard convention; derivatives accept x >= 0 (right limits at 0).
    double W(double x, int deriv = 0) const;
    // Z^{(r)}(x) = 1 + r int_0^x W(y) dy, x >= 0.
    double Z(double x) const;

    const ModelSpec& model() const { return model_; }
    const ScaleParams& params() const { return params_; }
    double rate() const { return r_; }

  private:
    ModelSpec model_;
    double r_;
    ScaleParams params_;
    bool brownian_;
    // cached per-model constants
    double bm_a_ = 0.0;      // mu/sigma^2
    double bm_xi_ = 0.0;     // bm_rate
    double bm_c_ = 0.0;      // 2/sigma^2
    double cl_wp_ = 0.0;     // 1/psi'(Phi(r))
    double cl_wz_ = 0.0;     // 1/psi'(zeta)
};

double scale_w(const ModelSpec& model, double r, double x, int deriv = 0);
double scale_z(const ModelSpec& model, double r, double x);

// E_x[e^{-r tau_a^+}; tau_a^+ < tau_0^-] = W(x)/W(a)
double two_sided_up(const ModelSpec& model, double r, double x, double a);
// E_x[e^{-r tau_0^-}; tau_0^- < tau_a^+] = Z(x) - Z(a) W(x)/W(a)
double two_sided_down(const ModelSpec& model, double r, double x, double a);

// Joint transform of (tau_U^+(b), min, max) for a fresh start (d = u = 0):
//   E[e^{-r tau_U^+(b) + u_arg * min X}; max X < v],  v in (0, b].
double drawup_triple_transform(const ModelSpec& model, double r, double b, double u_arg, double v);

// Dual process -X; only available for linear Brownian motion here.
ModelSpec dual_model(const ModelSpec& model);

}  // namespace ddc
