#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>

namespace mminet {

// Dense types used throughout the library. Everything is double precision;
// the aliases keep the scalar swappable in one place.
template <typename FloatType>
struct DenseTypes {
    using Scalar = FloatType;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
};

using Scalar = double;
using Matrix = DenseTypes<Scalar>::Matrix;
using Vector = DenseTypes<Scalar>::Vector;
using IntVector = Eigen::VectorXi;
using Index = Eigen::Index;

// log(sum(exp(v))) without overflow; -inf for an empty or all -inf input.
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::MatrixBase<Derived>& v) {
    using S = typename Derived::Scalar;
    if (v.size() == 0) return -std::numeric_limits<S>::infinity();
    const S m = v.maxCoeff();
    if (!(m > -std::numeric_limits<S>::infinity())) return m;
    return m + std::log((v.array() - m).exp().sum());
}

// splitmix64; used to derive independent substream seeds from a master seed.
inline std::uint64_t hash_mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
    return hash_mix(hash_mix(master) ^ hash_mix(salt));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt_a,
                                 std::uint64_t salt_b) {
    return derive_seed(derive_seed(master, salt_a), salt_b);
}

}  // namespace mminet
