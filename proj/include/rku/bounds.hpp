#pragma once

#include <string>
#include <vector>

#include "rku/conformal.hpp"
#include "rku/function.hpp"
#include "rku/pole.hpp"

namespace rku {

struct BoundReport {
  std::vector<double> values;  ///< values[m - 1] bounds the error after m steps
  double rate = 0.0;           ///< geometric mean per-step factor of eta over the curve
  double constant = 0.0;       ///< multiplier in front of eta_m
  std::string note;
};

/// Samples used to maximize 1/|B_m|; KU_NUM_SAMPLES_ETA overrides the default 4096.
Index eta_sample_count();

/// eta_m = max over x in [phi(alpha), phi(beta)] of 1/|B_m(x)|. Infinite
/// poles contribute 1/|x|. An empty pole list gives 1.
double eta_blaschke(const std::vector<Pole>& poles, const ConformalMap& map, const MarkovSupport& support);
double eta_blaschke(const PolePlan& plan, Index m, const ConformalMap& map, const MarkovSupport& support);

/// 4 (2 |f(omega)| / |phi(beta)|) eta_m for m = 1..m_max.
BoundReport markov_bound_hermitian(const SpectralWindow& window, const PolePlan& plan, const FunctionSpec& f,
                                   Index m_max);

/// 8 |f'(omega)| eta_m / (1 - eta_m) |B| |C|; eta_not_contracting if eta_m >= 1.
BoundReport markov_bound_nonhermitian(const SpectralWindow& window, const PolePlan& plan, const FunctionSpec& f,
                                      Index m_max, double norm_b, double norm_c);

/// 2 (1 + sqrt 2)^2 |D|_F |f' - p_{m-1}| with p_{m-1} the Chebyshev
/// interpolant of f' (an upper proxy for the best approximation).
BoundReport poly_update_bound(const SpectralWindow& window, const FunctionSpec& f, Index m_max, double norm_d_fro);

/// (1 + sqrt 2)^2 sup_E |f'| |D|_F
double frechet_perturbation_bound(const SpectralWindow& window, const FunctionSpec& f, double norm_d_fro);

/// Bound for f = z fhat(z) with fhat Markov and the m-th pole at infinity:
/// sup_E |z| times the Markov bound for fhat with the first m - 1 poles.
BoundReport markov_modified_bound(const SpectralWindow& window, const PolePlan& plan, const FunctionSpec& fhat,
                                  Index m);

/// 4 |A + D| + 2 |B J| |B|
double sign_bound_constant(double norm_a_plus_d, double norm_bj, double norm_b);

/// Sign-update bound: sign_bound_constant times the z^{-1/2} Markov estimate
/// on the window of the squares, for m = 1..m_max.
BoundReport sign_update_bound(const SpectralWindow& squared_window, const PolePlan& squared_plan, Index m_max,
                              double norm_a_plus_d, double norm_bj, double norm_b);

}  // namespace rku
