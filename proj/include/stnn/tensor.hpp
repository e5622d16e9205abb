#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stnn/matrix.hpp"

namespace stnn {

/// Dense 3-order tensor, used as the ground-truth oracle for the factorized
/// scorer and as the reconstruction engine for interpretability. Storage is
/// row-major with the third index fastest: offset(i,j,k) = (i*J + j)*K + k,
/// so frontal slices are contiguous stride patterns.
///
/// Oracle-only: construction rejects more than kMaxEntries entries to keep
/// full-scale tensors (n*n*f at production sizes is ~1e9) from ever being
/// materialized.
class DenseTensor3 {
 public:
    static constexpr std::size_t kMaxEntries = 10'000'000;

    DenseTensor3(std::size_t dim_i, std::size_t dim_j, std::size_t dim_k);

    /// Build from a flat row-major value array. Rejects length mismatches
    /// and non-finite entries.
    static DenseTensor3 from_values(std::size_t dim_i, std::size_t dim_j,
                                    std::size_t dim_k,
                                    std::vector<double> values);

    double& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return values_[(i * dim_j_ + j) * dim_k_ + k];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return values_[(i * dim_j_ + j) * dim_k_ + k];
    }

    std::size_t dim_i() const { return dim_i_; }
    std::size_t dim_j() const { return dim_j_; }
    std::size_t dim_k() const { return dim_k_; }

    const std::vector<double>& values() const { return values_; }

 private:
    std::size_t dim_i_ = 0;
    std::size_t dim_j_ = 0;
    std::size_t dim_k_ = 0;
    std::vector<double> values_;
};

/// Weighted rank-one factors of a 3-order tensor: entry (i,j,k) of the
/// reconstruction is sum_r lambda[r] * a_cols(i,r) * b_cols(j,r) * c_cols(k,r).
struct RankOneFactors {
    std::vector<double> lambda;  // length R
    Matrix a_cols;               // I x R
    Matrix b_cols;               // J x R
    Matrix c_cols;               // K x R

    std::size_t rank() const { return lambda.size(); }
};

/// Sum the weighted rank-one tensors into a dense tensor.
/// Throws DimensionError when the factor column counts disagree with
/// lambda's length.
DenseTensor3 cp_reconstruct(const RankOneFactors& factors);

/// Contract one tensor mode with a vector, dropping the order by one.
///
/// Modes are numbered by the chained-contraction order of the scorer: the
/// type axis z is contracted first (mode 3), then axis x (mode 2, first
/// storage index), then axis y (mode 1, second storage index).
///   mode 3: result(i,j) = sum_k t(i,j,k) * v[k]   (I x J)
///   mode 2: result(j,k) = sum_i t(i,j,k) * v[i]   (J x K)
///   mode 1: result(i,k) = sum_j t(i,j,k) * v[j]   (I x K)
/// Throws DimensionError when v's length differs from the contracted mode.
Matrix mode_product_vec(const DenseTensor3& t, std::span<const double> v,
                        int mode);

/// Matrix stage of the chain, for a frontal slice with axes (x, y):
///   mode 2: result[j] = sum_i m(i,j) * v[i]
///   mode 1: result[i] = sum_j m(i,j) * v[j]
std::vector<double> mode_product_vec(const Matrix& m, std::span<const double> v,
                                     int mode);

/// Final stage: contract an order-1 result with a vector (dot product).
double mode_product_vec(std::span<const double> t, std::span<const double> v);

/// Score one (e_p, e_q, k) triple against a dense tensor with dims (n, n, f):
/// returns sum_i sum_j t(i,j,k) * e_p[i] * e_q[j], computed as the chained
/// mode products (frontal slice at k, contract e_p on mode 2, then e_q).
/// e_p and e_q are dense real vectors of length n (binary fingerprints are
/// the 0/1 special case).
double dense_score(const DenseTensor3& t, std::span<const double> e_p,
                   std::span<const double> e_q, std::size_t k);

/// Fingerprint form of dense_score: bit index sets instead of dense vectors.
double dense_score(const DenseTensor3& t,
                   std::span<const std::uint32_t> fp_p_bits,
                   std::span<const std::uint32_t> fp_q_bits, std::size_t k);

/// The k-th frontal slice: M(i,j) = t(i,j,k). Throws IndexError on k >= K.
Matrix frontal_slice(const DenseTensor3& t, std::size_t k);

}  // namespace stnn
