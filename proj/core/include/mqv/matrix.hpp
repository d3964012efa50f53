#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mqv/scalar.hpp"

namespace mqv {

/// Dense exact matrix over a single field.  Row-major storage.
class ExactMatrix {
public:
    ExactMatrix() : field_(Field::rational()) {}
    ExactMatrix(const Field& f, size_t rows, size_t cols)
        : field_(f), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(f)) {}

    static ExactMatrix identity(const Field& f, size_t n);
    static ExactMatrix zero(const Field& f, size_t rows, size_t cols) {
        return ExactMatrix(f, rows, cols);
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const Field& field() const { return field_; }

    Scalar& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
    const Scalar& at(size_t r, size_t c) const { return data_[r * cols_ + c]; }

    ExactMatrix operator+(const ExactMatrix& o) const;
    ExactMatrix operator-(const ExactMatrix& o) const;
    ExactMatrix operator*(const ExactMatrix& o) const;
    ExactMatrix operator*(const Scalar& s) const;
    ExactMatrix operator-() const;
    bool operator==(const ExactMatrix& o) const;
    bool is_zero() const;

    ExactMatrix transpose() const;
    /// Gauss-Jordan inverse; for dual fields splits value/eps parts.
    /// Throws SingularOperator when not invertible.
    ExactMatrix inverse() const;

    ExactMatrix hstack(const ExactMatrix& right) const;
    ExactMatrix vstack(const ExactMatrix& below) const;
    ExactMatrix block(size_t r0, size_t c0, size_t nrows, size_t ncols) const;

    /// Value / eps components of a dual-field matrix.
    ExactMatrix value_part() const;
    ExactMatrix eps_part() const;

    std::string str() const;

private:
    Field field_;
    size_t rows_ = 0, cols_ = 0;
    std::vector<Scalar> data_;
};

struct RankKernel {
    size_t rank = 0;
    ExactMatrix kernel; // columns form a basis of the right kernel
};

/// Rank and right-kernel basis.  Fraction-free (Bareiss) forward elimination
/// over Q and cyclotomic fields, plain Gauss-Jordan over F_p.
/// Rejects eps-extensions (not a field).
RankKernel rank_kernel(const ExactMatrix& m);

size_t rank_of(const ExactMatrix& m);

/// True iff v (a rows x 1 column) lies in the column space of m.
bool membership(const ExactMatrix& m, const ExactMatrix& v);

/// Entrywise reduction mod p.  Over Q requires p to divide no denominator;
/// over Q(zeta_m) requires p = 1 (mod m) and maps zeta_m to the smallest
/// element of multiplicative order m in F_p.
ExactMatrix specialize_mod_p(const ExactMatrix& m, long p);
Scalar specialize_scalar_mod_p(const Scalar& s, long p);

/// Solve M x = b exactly (any consistent system, returns one solution).
/// Returns false when inconsistent.  Free variables are set to zero unless
/// `free_values` supplies them (indexed by column).
bool solve_linear(const ExactMatrix& m, const ExactMatrix& b, ExactMatrix& x,
                  const std::vector<Scalar>* free_values = nullptr);

} // namespace mqv
