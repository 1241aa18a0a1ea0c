#pragma once

#include <vector>

#include "mminet/types.hpp"

namespace mminet {

// Silverman's rule per output dimension: h_i = sigma_i * (4/((d+2)m))^(1/(d+4))
// with the sample standard deviation (m-1 denominator). Returns the diagonal
// of H, i.e. h_i^2. A dimension with zero spread gets h_i = 1e-6.
Vector silverman_bandwidth(const Eigen::Ref<const Matrix>& points);

// Log of the Gaussian kernel K_H(u) with diagonal H:
//   -(d/2) log(2pi) - 1/2 log|H| - 1/2 u^T H^-1 u.
// The exponent is negative; a density must decay away from its center.
double log_kernel(const Eigen::Ref<const Vector>& u,
                  const Eigen::Ref<const Vector>& bandwidth_diag);

// Class-conditional KDE state in the projected space. Immutable once built;
// all queries are pure.
struct KdeContext {
    std::vector<Matrix> class_refs;   // per class: m_c x d_y reference points
    std::vector<Vector> bandwidths;   // per class: diagonal of H_c (d_y entries)
    Vector log_priors;                // length L, exp sums to 1

    int num_classes() const { return static_cast<int>(class_refs.size()); }
    Index dim() const { return class_refs.front().cols(); }

    // Computes per-class Silverman bandwidths from the reference points and
    // validates priors and reference counts. Throws DataError on violation.
    static KdeContext build(std::vector<Matrix> refs, const Vector& priors);
};

// log p_hat(y | c) as a logsumexp over the class reference kernels.
double log_class_density(const Eigen::Ref<const Vector>& y, const KdeContext& ctx,
                         int c);

// Gradient of log_class_density in the query:
//   sum_j w_j * H_c^-1 (y_j - y),  w_j = softmax_j(log K_H(y - y_j)).
Vector grad_log_class_density(const Eigen::Ref<const Vector>& y, const KdeContext& ctx,
                              int c);

}  // namespace mminet
