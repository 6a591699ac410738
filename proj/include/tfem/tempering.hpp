#pragma once

// The tempering policies: how J_min is chosen from (h, dim, order), the
// clamped inverse 1/max(J, J_min), the optimal band diffusion factor D and
// the zero-measure penalty strength Dtilde.

#include <cmath>
#include <stdexcept>
#include <variant>

namespace tfem {

// Interpolation constant of the circumradius estimate, 2*sqrt(2) + 2.
inline constexpr double kCircumradiusConstant = 4.82842712474619;

// Convention constant tying Dtilde to h/J_min; pinned by the matrix
// equivalence oracle in the mortar module (with J = 2*area it is exactly 1).
inline constexpr double kPenaltyAlpha = 1.0;

struct PowerLawPolicy {
  double C = 1.0;
  double k = 3.0;
};
struct FixedPolicy {
  double jmin = 0.0;
};
struct TheoreticalOptPolicy {
  double w1 = 1.0;  // |u|_{W^{1,inf}} estimate on the band
  double w2 = 1.0;  // |u|_{W^{2,inf}} estimate on the band
  double Cc = kCircumradiusConstant;
};
struct HighOrderPolicy {
  double C = 1.0;
  int order = 1;
};

using TemperPolicy = std::variant<PowerLawPolicy, FixedPolicy, TheoreticalOptPolicy, HighOrderPolicy>;

inline TemperPolicy default_policy(int dim) { return PowerLawPolicy{1.0, double(dim + 1)}; }

inline double jmin(const TemperPolicy& policy, double h, int dim, int order) {
  if (h <= 0.0) throw std::invalid_argument("jmin: h must be > 0");
  (void)order;
  struct Visitor {
    double h;
    int dim;
    double operator()(const PowerLawPolicy& p) const { return p.C * std::pow(h, p.k); }
    double operator()(const FixedPolicy& p) const {
      if (p.jmin < 0.0) throw std::invalid_argument("jmin: Fixed value must be >= 0");
      return p.jmin;
    }
    double operator()(const TheoreticalOptPolicy& p) const {
      if (p.w1 == 0.0) throw std::invalid_argument("jmin: TheoreticalOpt needs w1 != 0");
      return std::pow(h, dim + 1) * (p.w2 / p.w1) * std::sqrt(3.0 * p.Cc / 8.0);
    }
    double operator()(const HighOrderPolicy& p) const {
      return p.C * std::pow(h, 2.2 + 0.8 * p.order);
    }
  };
  const double v = std::visit(Visitor{h, dim}, policy);
  if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("jmin: produced invalid value");
  return v;
}

inline double clamped_inverse(double J, double Jmin) {
  if (J < 0.0 || Jmin < 0.0) throw std::invalid_argument("clamped_inverse: negative input");
  const double m = std::max(J, Jmin);
  if (m == 0.0) throw std::invalid_argument("clamped_inverse: J and Jmin both zero");
  return 1.0 / m;
}

// Optimal band diffusion factor D = min((hbar/h^2) (w1/w2) sqrt(2/(3 Cc)), 1).
inline double optimal_D(double hbar, double h, double w1, double w2,
                        double Cc = kCircumradiusConstant) {
  if (h <= 0.0) throw std::invalid_argument("optimal_D: h must be > 0");
  if (hbar < 0.0) throw std::invalid_argument("optimal_D: hbar must be >= 0");
  if (w2 == 0.0) throw std::invalid_argument("optimal_D: w2 must be nonzero");
  const double D = (hbar / (h * h)) * (w1 / w2) * std::sqrt(2.0 / (3.0 * Cc));
  return std::min(D, 1.0);
}

// Penalty strength of the zero-measure scheme: Dtilde = alpha * h / J_min.
inline double penalty_strength_Dtilde(double h, double Jmin) {
  if (h <= 0.0 || Jmin <= 0.0)
    throw std::invalid_argument("penalty_strength_Dtilde: h and Jmin must be > 0");
  return kPenaltyAlpha * h / Jmin;
}

}  // namespace tfem
