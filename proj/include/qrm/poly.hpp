#pragma once

#include <vector>

#include "qrm/complex_util.hpp"

namespace qrm {

/// Dense complex polynomial, coefficients ascending in degree.
using Poly = std::vector<Complex>;

Complex poly_eval(const Poly& p, Complex z);
Poly poly_derivative(const Poly& p);
Poly poly_mul(const Poly& a, const Poly& b);

/// Divide by the coefficient of largest modulus (no-op on the zero poly).
void poly_normalize_max(Poly& p);

/// Drop leading coefficients below rel_tol * max|coeff|.
void poly_trim(Poly& p, double rel_tol = 1e-14);

/// |p(z)| measured against the evaluation-noise scale sum |c_k||z|^k.
double poly_backward_error(const Poly& p, Complex z);

struct RootResult {
    std::vector<Complex> roots;
    double max_residual = 0.0;  // scaled backward error after polish
    bool converged = true;
};

/// All complex roots by simultaneous Aberth-Ehrlich refinement from
/// Newton-polygon initial points, then Newton polish on the input
/// polynomial. Exact zero constant terms are factored out beforehand.
RootResult aberth_roots(const Poly& p, int max_iterations = 600);

struct RootCluster {
    Complex center;
    int multiplicity = 1;
};

/// Single-linkage clustering with relative radius (default 1e-5); reported
/// multiplicity is the cluster size.
std::vector<RootCluster> cluster_roots(const std::vector<Complex>& roots,
                                       double rel_radius = 1e-5);

}  // namespace qrm
