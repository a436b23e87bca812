#pragma once

#include "stiffspec/problem.hpp"
#include "stiffspec/trace.hpp"

namespace stiffspec {

/// The singular weighted metric of the transmission problem; the problem is
/// self-adjoint in L2 with this inner product for each fixed epsilon.
struct WeightedMetric {
  double epsilon = 1.0;
};

/// (f,g)_eps = eps^{-1} (r f, g)_{L2(a,0)} + (rho f, g)_{L2(0,b)}.
double inner_eps(const WeightedMetric& m, const ProblemSpec& p,
                 const TracePair& f, const TracePair& g);

/// Energy product <f,g>_eps = int_a^0 k f'g' + eps int_0^b kappa f'g'.
double energy_inner_eps(const WeightedMetric& m, const ProblemSpec& p,
                        const TracePair& f, const TracePair& g);

/// (f,g)_R = int_a^b R f g  (R = r on the left, rho on the right).
double inner_R(const ProblemSpec& p, const TracePair& f, const TracePair& g);

/// Plain L2(a,b) product, no weights.
double inner_plain(const TracePair& f, const TracePair& g);

}  // namespace stiffspec
