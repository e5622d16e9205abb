#include "stnn/tensor.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "stnn/errors.hpp"

namespace stnn {

namespace {

void check_dims(std::size_t dim_i, std::size_t dim_j, std::size_t dim_k) {
    if (dim_i == 0 || dim_j == 0 || dim_k == 0) {
        throw DimensionError("tensor dimensions must be positive, got (" +
                             std::to_string(dim_i) + ", " + std::to_string(dim_j) +
                             ", " + std::to_string(dim_k) + ")");
    }
    // Overflow-safe product guard.
    if (dim_i > DenseTensor3::kMaxEntries / dim_j ||
        dim_i * dim_j > DenseTensor3::kMaxEntries / dim_k) {
        throw DimensionError("tensor of " + std::to_string(dim_i) + "x" +
                             std::to_string(dim_j) + "x" + std::to_string(dim_k) +
                             " exceeds the dense-oracle entry cap");
    }
}

void check_mode(int mode) {
    if (mode < 1 || mode > 3) {
        throw DimensionError("mode must be 1, 2 or 3, got " + std::to_string(mode));
    }
}

void check_length(std::size_t got, std::size_t want, int mode) {
    if (got != want) {
        throw DimensionError("vector length " + std::to_string(got) +
                             " does not match mode-" + std::to_string(mode) +
                             " extent " + std::to_string(want));
    }
}

}  // namespace

DenseTensor3::DenseTensor3(std::size_t dim_i, std::size_t dim_j, std::size_t dim_k)
    : dim_i_(dim_i), dim_j_(dim_j), dim_k_(dim_k) {
    check_dims(dim_i, dim_j, dim_k);
    values_.assign(dim_i * dim_j * dim_k, 0.0);
}

DenseTensor3 DenseTensor3::from_values(std::size_t dim_i, std::size_t dim_j,
                                       std::size_t dim_k,
                                       std::vector<double> values) {
    check_dims(dim_i, dim_j, dim_k);
    if (values.size() != dim_i * dim_j * dim_k) {
        throw DimensionError("value count " + std::to_string(values.size()) +
                             " does not match " + std::to_string(dim_i) + "x" +
                             std::to_string(dim_j) + "x" + std::to_string(dim_k));
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw DimensionError("tensor values must be finite");
        }
    }
    DenseTensor3 t(dim_i, dim_j, dim_k);
    t.values_ = std::move(values);
    return t;
}

DenseTensor3 cp_reconstruct(const RankOneFactors& factors) {
    const std::size_t rank = factors.rank();
    if (factors.a_cols.cols() != rank || factors.b_cols.cols() != rank ||
        factors.c_cols.cols() != rank) {
        throw DimensionError(
            "factor column counts (" + std::to_string(factors.a_cols.cols()) +
            ", " + std::to_string(factors.b_cols.cols()) + ", " +
            std::to_string(factors.c_cols.cols()) + ") do not all equal rank " +
            std::to_string(rank));
    }
    DenseTensor3 t(factors.a_cols.rows(), factors.b_cols.rows(),
                   factors.c_cols.rows());
    for (std::size_t i = 0; i < t.dim_i(); ++i) {
        for (std::size_t j = 0; j < t.dim_j(); ++j) {
            for (std::size_t k = 0; k < t.dim_k(); ++k) {
                double sum = 0.0;
                for (std::size_t r = 0; r < rank; ++r) {
                    sum += factors.lambda[r] * factors.a_cols(i, r) *
                           factors.b_cols(j, r) * factors.c_cols(k, r);
                }
                t(i, j, k) = sum;
            }
        }
    }
    return t;
}

Matrix mode_product_vec(const DenseTensor3& t, std::span<const double> v,
                        int mode) {
    check_mode(mode);
    const std::size_t di = t.dim_i(), dj = t.dim_j(), dk = t.dim_k();
    switch (mode) {
        case 3: {
            check_length(v.size(), dk, 3);
            Matrix m(di, dj);
            for (std::size_t i = 0; i < di; ++i)
                for (std::size_t j = 0; j < dj; ++j) {
                    double sum = 0.0;
                    for (std::size_t k = 0; k < dk; ++k) sum += t(i, j, k) * v[k];
                    m(i, j) = sum;
                }
            return m;
        }
        case 2: {
            check_length(v.size(), di, 2);
            Matrix m(dj, dk);
            for (std::size_t j = 0; j < dj; ++j)
                for (std::size_t k = 0; k < dk; ++k) {
                    double sum = 0.0;
                    for (std::size_t i = 0; i < di; ++i) sum += t(i, j, k) * v[i];
                    m(j, k) = sum;
                }
            return m;
        }
        default: {  // mode 1
            check_length(v.size(), dj, 1);
            Matrix m(di, dk);
            for (std::size_t i = 0; i < di; ++i)
                for (std::size_t k = 0; k < dk; ++k) {
                    double sum = 0.0;
                    for (std::size_t j = 0; j < dj; ++j) sum += t(i, j, k) * v[j];
                    m(i, k) = sum;
                }
            return m;
        }
    }
}

std::vector<double> mode_product_vec(const Matrix& m, std::span<const double> v,
                                     int mode) {
    if (mode != 1 && mode != 2) {
        throw DimensionError("matrix mode must be 1 or 2, got " +
                             std::to_string(mode));
    }
    if (mode == 2) {
        check_length(v.size(), m.rows(), 2);
        std::vector<double> out(m.cols(), 0.0);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) out[j] += m(i, j) * v[i];
        return out;
    }
    check_length(v.size(), m.cols(), 1);
    std::vector<double> out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) sum += m(i, j) * v[j];
        out[i] = sum;
    }
    return out;
}

double mode_product_vec(std::span<const double> t, std::span<const double> v) {
    check_length(v.size(), t.size(), 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) sum += t[i] * v[i];
    return sum;
}

double dense_score(const DenseTensor3& t, std::span<const double> e_p,
                   std::span<const double> e_q, std::size_t k) {
    if (k >= t.dim_k()) {
        throw IndexError("type index " + std::to_string(k) + " out of range [0, " +
                         std::to_string(t.dim_k()) + ")");
    }
    const Matrix slice = frontal_slice(t, k);
    const std::vector<double> by_q_axis = mode_product_vec(slice, e_p, 2);
    return mode_product_vec(std::span<const double>(by_q_axis), e_q);
}

double dense_score(const DenseTensor3& t,
                   std::span<const std::uint32_t> fp_p_bits,
                   std::span<const std::uint32_t> fp_q_bits, std::size_t k) {
    std::vector<double> e_p(t.dim_i(), 0.0);
    std::vector<double> e_q(t.dim_j(), 0.0);
    for (std::uint32_t i : fp_p_bits) {
        if (i >= t.dim_i()) {
            throw IndexError("substructure index " + std::to_string(i) +
                             " out of range [0, " + std::to_string(t.dim_i()) + ")");
        }
        e_p[i] = 1.0;
    }
    for (std::uint32_t j : fp_q_bits) {
        if (j >= t.dim_j()) {
            throw IndexError("substructure index " + std::to_string(j) +
                             " out of range [0, " + std::to_string(t.dim_j()) + ")");
        }
        e_q[j] = 1.0;
    }
    return dense_score(t, e_p, e_q, k);
}

Matrix frontal_slice(const DenseTensor3& t, std::size_t k) {
    if (k >= t.dim_k()) {
        throw IndexError("slice index " + std::to_string(k) + " out of range [0, " +
                         std::to_string(t.dim_k()) + ")");
    }
    Matrix m(t.dim_i(), t.dim_j());
    for (std::size_t i = 0; i < t.dim_i(); ++i)
        for (std::size_t j = 0; j < t.dim_j(); ++j) m(i, j) = t(i, j, k);
    return m;
}

}  // namespace stnn
