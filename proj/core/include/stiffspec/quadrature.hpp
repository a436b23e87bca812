#pragma once

#include <functional>
#include <vector>

#include "stiffspec/trace.hpp"

namespace stiffspec {

/// Adaptive Gauss-Kronrod (G7,K15) quadrature of f over [lo, hi] with
/// absolute error <= tol*(1+|result|). Throws NumericalError if the
/// refinement depth is exhausted before convergence.
double quad(const std::function<double(double)>& f, double lo, double hi,
            double tol = 1e-12);

/// Composite 7-point Gauss-Legendre over the cells of a given mesh.
/// Exact enough for products of cubic trace interpolants with smooth
/// weights; cost is strictly proportional to the mesh size.
double quad_mesh(const std::function<double(double)>& f,
                 const std::vector<double>& mesh);

/// Sorted union of trace meshes clipped to their common interval.
std::vector<double> merged_mesh(const FunctionTrace& A, const FunctionTrace& B);

/// Integral of w(x) * A(x) * B(x) over the traces' (shared) interval,
/// on the merged mesh. `w` may be null for weight 1.
double trace_product_integral(const std::function<double(double)>& w,
                              const FunctionTrace& A, const FunctionTrace& B);

}  // namespace stiffspec
