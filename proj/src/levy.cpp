#include "ddc/levy.hpp"

#include <cmath>
#include <limits>

#include "ddc/quad.hpp"
#include "ddc/roots.hpp"

namespace ddc {

namespace {

// sinh(t)/t, stable near 0.
double sinhc(double t) {
    if (std::abs(t) < 1e-5) {
        const double t2 = t * t;
        return 1.0 + t2 / 6.0 * (1.0 + t2 / 20.0);
    }
    return std::sinh(t) / t;
}

}  // namespace

double laplace_exponent(const ModelSpec& model, double phi) {
    if (phi < 0.0) throw std::domain_error("laplace_exponent: phi must be >= 0");
    if (const auto* bm = std::get_if<LinearBrownian>(&model)) {
        return bm->mu * phi + 0.5 * bm->sigma * bm->sigma * phi * phi;
    }
    const auto& cl = std::get<CramerLundberg>(model);
    return cl.mu_hat * phi + cl.beta * cl.rho / (cl.rho + phi) - cl.beta;
}

double laplace_exponent_deriv(const ModelSpec& model, double phi) {
    if (phi < 0.0) throw std::domain_error("laplace_exponent_deriv: phi must be >= 0");
    if (const auto* bm = std::get_if<LinearBrownian>(&model)) {
        return bm->mu + bm->sigma * bm->sigma * phi;
    }
    const auto& cl = std::get<CramerLundberg>(model);
    const double s = cl.rho + phi;
    return cl.mu_hat - cl.beta * cl.rho / (s * s);
}

namespace {

// psi extended left of 0 (needed for the CL root zeta < 0; defined on (-rho, inf)).
double psi_ext(const ModelSpec& model, double phi) {
    if (const auto* bm = std::get_if<LinearBrownian>(&model)) {
        return bm->mu * phi + 0.5 * bm->sigma * bm->sigma * phi * phi;
    }
    const auto& cl = std::get<CramerLundberg>(model);
    return cl.mu_hat * phi + cl.beta * cl.rho / (cl.rho + phi) - cl.beta;
}

double psi_ext_deriv(const ModelSpec& model, double phi) {
    if (const auto* bm = std::get_if<LinearBrownian>(&model)) {
        return bm->mu + bm->sigma * bm->sigma * phi;
    }
    const auto& cl = std::get<CramerLundberg>(model);
    const double s = cl.rho + phi;
    return cl.mu_hat - cl.beta * cl.rho / (s * s);
}

// Largest root of psi = r in closed form, used as the Newton seed.
double phi_closed_form(const ModelSpec& model, double r) {
    if (const auto* bm = std::get_if<LinearBrownian>(&model)) {
        const double s2 = bm->sigma * bm->sigma;
        return (-bm->mu + std::sqrt(bm->mu * bm->mu + 2.0 * r * s2)) / s2;
    }
    const auto& cl = std::get<CramerLundberg>(model);
    const double q = cl.beta + r - cl.mu_hat * cl.rho;
    const double disc = q * q + 4.0 * r * cl.mu_hat * cl.rho;
    const double root = (q + std::sqrt(disc)) / (2.0 * cl.mu_hat);
    return std::max(root, 0.0);
}

double zeta_closed_form(const CramerLundberg& cl, double r) {
    const double q = cl.beta + r - cl.mu_hat * cl.rho;
    const double disc = q * q + 4.0 * r * cl.mu_hat * cl.rho;
    return (q - std::sqrt(disc)) / (2.0 * cl.mu_hat);
}

}  // namespace

double phi_inverse(const ModelSpec& model, double r) {
    if (r < 0.0) throw std::domain_error("phi_inverse: r must be >= 0");
    validate(model);
    const double guess = phi_closed_form(model, r);
    if (guess == 0.0) return 0.0;
    // Bracket around the closed-form seed, then polish.
    double lo = 0.0, hi = std::max(2.0 * guess, 1e-8);
    while (psi_ext(model, hi) < r) hi *= 2.0;
    const auto f = [&](double x) { return psi_ext(model, x) - r; };
    const auto df = [&](double x) { return psi_ext_deriv(model, x); };
    double root = newton_bisect(f, df, guess, lo, hi, 1e-15);
    return root;
}

ScaleParams scale_params(const ModelSpec& model, double r) {
    if (r < 0.0) throw std::domain_error("scale_params: r must be >= 0");
    validate(model);
    ScaleParams sp;
    sp.r = r;
    sp.phi_r = phi_inverse(model, r);
    if (const auto* bm = std::get_if<LinearBrownian>(&model)) {
        const double s2 = bm->sigma * bm->sigma;
        sp.bm_rate = std::sqrt(bm->mu * bm->mu + 2.0 * r * s2) / s2;
        return sp;
    }
    const auto& cl = std::get<CramerLundberg>(model);
    if (cl.beta <= 0.0)
        throw unsupported_config_error("Cramer-Lundberg scale functions require beta > 0");
    double z = zeta_closed_form(cl, r);
    // Polish on (-rho, phi_r): psi decreases then increases, the small root is
    // bracketed by the minimiser of psi.
    {
        const double phi_min = std::sqrt(cl.beta * cl.rho / cl.mu_hat) - cl.rho;  // psi'(phi_min) = 0
        double lo = -cl.rho * (1.0 - 1e-12), hi = std::max(phi_min, lo + 1e-12);
        if (psi_ext(model, hi) <= r) {
            // psi is decreasing on (lo, hi): flip the bracket orientation by
            // searching psi(x) - r on the decreasing branch via bisection.
            const auto g = [&](double x) { return r - psi_ext(model, x); };
            const auto dg = [&](double x) { return -psi_ext_deriv(model, x); };
            z = newton_bisect(g, dg, z, lo, hi, 1e-15);
        }
    }
    const double check = psi_ext(model, z);
    if (std::abs(check - r) > 1e-9 * (1.0 + std::abs(r)))
        throw std::runtime_error("scale_params: zeta verification failed");
    sp.zeta = z;
    sp.dpsi_phi = psi_ext_deriv(model, sp.phi_r);
    sp.dpsi_zeta = psi_ext_deriv(model, sp.zeta);
    if (sp.dpsi_phi == 0.0 || sp.dpsi_zeta == 0.0)
        throw degenerate_contract_error("scale_params: repeated root of psi = r");
    return sp;
}

ScaleFns::ScaleFns(const ModelSpec& model, double r)
    : model_(model), r_(r), params_(scale_params(model, r)), brownian_(is_brownian(model)) {
    if (brownian_) {
        const auto& bm = std::get<LinearBrownian>(model_);
        const double s2 = bm.sigma * bm.sigma;
        bm_a_ = bm.mu / s2;
        bm_xi_ = params_.bm_rate;
        bm_c_ = 2.0 / s2;
    } else {
        cl_wp_ = 1.0 / params_.dpsi_phi;
        cl_wz_ = 1.0 / params_.dpsi_zeta;
    }
}

double ScaleFns::W(double x, int deriv) const {
    if (deriv < 0 || deriv > 2) throw std::domain_error("scale_w: deriv must be 0, 1 or 2");
    if (x < 0.0) {
        if (deriv == 0) return 0.0;
        throw std::domain_error("scale_w: derivatives require x >= 0");
    }
    if (brownian_) {
        // W(x) = (2/(Xi sigma^2)) e^{-A x} sinh(Xi x), A = mu/sigma^2,
        // Xi = sqrt(mu^2 + 2 r sigma^2)/sigma^2.  Xi = 0 only when mu = r = 0,
        // where W(x) = 2x/sigma^2.
        const double A = bm_a_, Xi = bm_xi_;
        const double e = std::exp(-A * x);
        const double sh = sinhc(Xi * x) * x;  // sinh(Xi x)/Xi
        const double ch = std::cosh(Xi * x);
        switch (deriv) {
            case 0:
                return bm_c_ * e * sh;
            case 1:
                return bm_c_ * e * (ch - A * sh);
            case 2:
                return bm_c_ * e * ((Xi * Xi + A * A) * sh - 2.0 * A * ch);
        }
    }
    const double p = params_.phi_r, z = params_.zeta;
    const double ep = std::exp(p * x), ez = std::exp(z * x);
    switch (deriv) {
        case 0:
            return cl_wp_ * ep + cl_wz_ * ez;
        case 1:
            return cl_wp_ * p * ep + cl_wz_ * z * ez;
        case 2:
            return cl_wp_ * p * p * ep + cl_wz_ * z * z * ez;
    }
    return 0.0;  // unreachable
}

double ScaleFns::Z(double x) const {
    if (x < 0.0) throw std::domain_error("scale_z: x must be >= 0");
    if (r_ == 0.0) return 1.0;
    if (brownian_) {
        const double A = bm_a_, Xi = bm_xi_;
        // Z(x) = e^{-A x} (cosh(Xi x) + (A/Xi) sinh(Xi x))
        return std::exp(-A * x) * (std::cosh(Xi * x) + A * x * sinhc(Xi * x));
    }
    const double p = params_.phi_r, z = params_.zeta;
    // r (e^{p x} - 1)/(p psi'(p)) + r (e^{z x} - 1)/(z psi'(z)) + 1; the p term
    // is safe since Phi(r) > 0 for r > 0.
    return 1.0 + r_ * cl_wp_ * std::expm1(p * x) / p + r_ * cl_wz_ * std::expm1(z * x) / z;
}

double scale_w(const ModelSpec& model, double r, double x, int deriv) {
    return ScaleFns(model, r).W(x, deriv);
}

double scale_z(const ModelSpec& model, double r, double x) {
    return ScaleFns(model, r).Z(x);
}

double two_sided_up(const ModelSpec& model, double r, double x, double a) {
    if (a <= 0.0) throw std::domain_error("two_sided_up: a must be > 0");
    if (x < 0.0 || x > a) throw std::domain_error("two_sided_up: x must lie in [0, a]");
    ScaleFns s(model, r);
    return s.W(x) / s.W(a);
}

double two_sided_down(const ModelSpec& model, double r, double x, double a) {
    if (a <= 0.0) throw std::domain_error("two_sided_down: a must be > 0");
    if (x < 0.0 || x > a) throw std::domain_error("two_sided_down: x must lie in [0, a]");
    ScaleFns s(model, r);
    return s.Z(x) - s.Z(a) * s.W(x) / s.W(a);
}

double drawup_triple_transform(const ModelSpec& model, double r, double b, double u_arg, double v) {
    if (b <= 0.0) throw std::domain_error("drawup_triple_transform: b must be > 0");
    if (v <= 0.0 || v > b) throw std::domain_error("drawup_triple_transform: v must lie in (0, b]");
    if (u_arg < 0.0) throw std::domain_error("drawup_triple_transform: u_arg must be >= 0");
    ScaleFns s(model, r);
    const double coeff = r - laplace_exponent(model, u_arg);
    const auto integral = [&](double y_hi) {
        if (y_hi <= 0.0) return 0.0;
        return quad_gk([&](double y) { return std::exp(-u_arg * y) * s.W(y); }, 0.0, y_hi, 1e-10, 1e-12);
    };
    const double num = 1.0 + coeff * integral(b - v);
    const double den = 1.0 + coeff * integral(b);
    return std::exp(-u_arg * b) * num / den - std::exp(-u_arg * (b - v)) * s.W(b - v) / s.W(b);
}

ModelSpec dual_model(const ModelSpec& model) {
    if (const auto* bm = std::get_if<LinearBrownian>(&model)) {
        return LinearBrownian{-bm->mu, bm->sigma};
    }
    throw unsupported_config_error("dual_model: only available for linear Brownian motion");
}

}  // namespace ddc
