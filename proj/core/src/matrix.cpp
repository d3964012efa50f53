#include "mqv/matrix.hpp"

#include <numeric>
#include <sstream>

namespace mqv {

ExactMatrix ExactMatrix::identity(const Field& f, size_t n) {
    ExactMatrix m(f, n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
    return m;
}

ExactMatrix ExactMatrix::operator+(const ExactMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch("matrix add");
    ExactMatrix r = *this;
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
    return r;
}

ExactMatrix ExactMatrix::operator-(const ExactMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch("matrix sub");
    ExactMatrix r = *this;
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& o) const {
    if (cols_ != o.rows_) throw ShapeMismatch("matrix mul " + std::to_string(rows_) + "x" +
                                              std::to_string(cols_) + " * " +
                                              std::to_string(o.rows_) + "x" +
                                              std::to_string(o.cols_));
    if (field_ != o.field_) throw FieldMismatch("matrix mul fields differ");
    ExactMatrix r(field_, rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            const Scalar& a = at(i, k);
            if (a.is_zero()) continue;
            for (size_t j = 0; j < o.cols_; ++j) {
                const Scalar& b = o.at(k, j);
                if (b.is_zero()) continue;
                r.at(i, j) = r.at(i, j) + a * b;
            }
        }
    return r;
}

ExactMatrix ExactMatrix::operator*(const Scalar& s) const {
    ExactMatrix r = *this;
    for (auto& x : r.data_) x = x * s;
    return r;
}

ExactMatrix ExactMatrix::operator-() const {
    ExactMatrix r = *this;
    for (auto& x : r.data_) x = -x;
    return r;
}

bool ExactMatrix::operator==(const ExactMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (size_t i = 0; i < data_.size(); ++i)
        if (data_[i] != o.data_[i]) return false;
    return true;
}

bool ExactMatrix::is_zero() const {
    for (const auto& x : data_)
        if (!x.is_zero()) return false;
    return true;
}

ExactMatrix ExactMatrix::transpose() const {
    ExactMatrix r(field_, cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

ExactMatrix ExactMatrix::hstack(const ExactMatrix& right) const {
    if (rows_ != right.rows_) throw ShapeMismatch("hstack");
    ExactMatrix r(field_, rows_, cols_ + right.cols_);
    for (size_t i = 0; i < rows_; ++i) {
        for (size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
        for (size_t j = 0; j < right.cols_; ++j) r.at(i, cols_ + j) = right.at(i, j);
    }
    return r;
}

ExactMatrix ExactMatrix::vstack(const ExactMatrix& below) const {
    if (cols_ != below.cols_) throw ShapeMismatch("vstack");
    ExactMatrix r(field_, rows_ + below.rows_, cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (size_t i = 0; i < below.rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r.at(rows_ + i, j) = below.at(i, j);
    return r;
}

ExactMatrix ExactMatrix::block(size_t r0, size_t c0, size_t nrows, size_t ncols) const {
    ExactMatrix r(field_, nrows, ncols);
    for (size_t i = 0; i < nrows; ++i)
        for (size_t j = 0; j < ncols; ++j) r.at(i, j) = at(r0 + i, c0 + j);
    return r;
}

ExactMatrix ExactMatrix::value_part() const {
    ExactMatrix r(field_.base(), rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i].value_part();
    return r;
}

ExactMatrix ExactMatrix::eps_part() const {
    ExactMatrix r(field_.base(), rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i].eps_part();
    return r;
}

ExactMatrix ExactMatrix::inverse() const {
    if (rows_ != cols_) throw ShapeMismatch("inverse of non-square matrix");
    if (field_.dual()) {
        // (A + eps B)^{-1} = A^{-1} - eps A^{-1} B A^{-1}
        ExactMatrix a_inv = value_part().inverse();
        ExactMatrix e = -(a_inv * eps_part() * a_inv);
        ExactMatrix r(field_, rows_, cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j)
                r.at(i, j) = Scalar::with_eps(a_inv.at(i, j), e.at(i, j));
        return r;
    }
    ExactMatrix aug = hstack(identity(field_, rows_));
    size_t n = rows_;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && aug.at(piv, col).is_zero()) ++piv;
        if (piv == n) throw SingularOperator("matrix not invertible");
        if (piv != col)
            for (size_t j = 0; j < 2 * n; ++j) std::swap(aug.at(piv, j), aug.at(col, j));
        Scalar inv = aug.at(col, col).inverse();
        for (size_t j = 0; j < 2 * n; ++j) aug.at(col, j) = aug.at(col, j) * inv;
        for (size_t i = 0; i < n; ++i) {
            if (i == col || aug.at(i, col).is_zero()) continue;
            Scalar f = aug.at(i, col);
            for (size_t j = 0; j < 2 * n; ++j)
                aug.at(i, j) = aug.at(i, j) - f * aug.at(col, j);
        }
    }
    return aug.block(0, n, n, n);
}

std::string ExactMatrix::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j).str();
    }
    os << "]";
    return os.str();
}

namespace {

// Fraction-free forward elimination (Bareiss).  Works in-place on a copy;
// returns pivot columns.  Entries stay in the subring generated by the
// input entries, which keeps rational coefficient growth tame.
std::vector<size_t> bareiss_forward(ExactMatrix& m) {
    std::vector<size_t> pivots;
    const size_t rows = m.rows(), cols = m.cols();
    Scalar prev = Scalar::one(m.field());
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && m.at(piv, c).is_zero()) ++piv;
        if (piv == rows) continue;
        if (piv != r)
            for (size_t j = 0; j < cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
        const Scalar p = m.at(r, c);
        for (size_t i = r + 1; i < rows; ++i) {
            const Scalar f = m.at(i, c);
            for (size_t j = 0; j < cols; ++j)
                m.at(i, j) = (m.at(i, j) * p - f * m.at(r, j)) / prev;
        }
        prev = p;
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// Plain Gauss-Jordan to reduced row echelon form; returns pivot columns.
std::vector<size_t> rref(ExactMatrix& m) {
    std::vector<size_t> pivots;
    const size_t rows = m.rows(), cols = m.cols();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && m.at(piv, c).is_zero()) ++piv;
        if (piv == rows) continue;
        if (piv != r)
            for (size_t j = 0; j < cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
        Scalar inv = m.at(r, c).inverse();
        for (size_t j = 0; j < cols; ++j) m.at(r, j) = m.at(r, j) * inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m.at(i, c).is_zero()) continue;
            Scalar f = m.at(i, c);
            for (size_t j = 0; j < cols; ++j) m.at(i, j) = m.at(i, j) - f * m.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace

RankKernel rank_kernel(const ExactMatrix& m) {
    if (m.field().dual())
        throw FieldMismatch("rank_kernel requires a field, not an eps-extension");
    ExactMatrix work = m;
    std::vector<size_t> pivots;
    if (m.field().kind() == Field::Kind::Prime) {
        pivots = rref(work);
    } else {
        pivots = bareiss_forward(work);
        // Normalize the echelon rows so kernel extraction below can treat
        // the result like an RREF: back-eliminate above each pivot.
        const size_t cols = work.cols();
        for (size_t r = pivots.size(); r-- > 0;) {
            Scalar inv = work.at(r, pivots[r]).inverse();
            for (size_t j = 0; j < cols; ++j) work.at(r, j) = work.at(r, j) * inv;
            for (size_t i = 0; i < r; ++i) {
                Scalar f = work.at(i, pivots[r]);
                if (f.is_zero()) continue;
                for (size_t j = 0; j < cols; ++j)
                    work.at(i, j) = work.at(i, j) - f * work.at(r, j);
            }
        }
    }

    RankKernel out;
    out.rank = pivots.size();
    const size_t cols = m.cols();
    std::vector<bool> is_pivot(cols, false);
    for (size_t c : pivots) is_pivot[c] = true;
    out.kernel = ExactMatrix(m.field(), cols, cols - pivots.size());
    size_t k = 0;
    for (size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        out.kernel.at(c, k) = Scalar::one(m.field());
        for (size_t r = 0; r < pivots.size(); ++r)
            out.kernel.at(pivots[r], k) = -work.at(r, c);
        ++k;
    }
    return out;
}

size_t rank_of(const ExactMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    ExactMatrix work = m;
    if (m.field().kind() == Field::Kind::Prime) return rref(work).size();
    return bareiss_forward(work).size();
}

bool membership(const ExactMatrix& m, const ExactMatrix& v) {
    if (v.cols() != 1 || v.rows() != m.rows()) throw ShapeMismatch("membership shapes");
    if (m.field() != v.field()) throw FieldMismatch("membership fields differ");
    return rank_of(m.hstack(v)) == rank_of(m);
}

Scalar specialize_scalar_mod_p(const Scalar& s, long p) {
    const Field target = Field::prime(p);
    switch (s.field().kind()) {
        case Field::Kind::Prime:
            if (s.field().characteristic() != p) throw BadPrime("characteristic mismatch");
            return s;
        case Field::Kind::Rational:
            return Scalar::from_rat(target, s.rat());
        case Field::Kind::Cyclotomic: {
            const unsigned m = s.field().cyclo_order();
            if ((p - 1) % m != 0)
                throw BadPrime("p = " + std::to_string(p) + " is not 1 mod " +
                               std::to_string(m));
            // smallest element of multiplicative order exactly m in F_p
            long root = 0;
            for (long x = 2; x < p; ++x) {
                long v = 1;
                bool proper = true;
                for (unsigned e = 1; e < m; ++e) {
                    v = v * x % p;
                    if (v == 1) { proper = false; break; }
                }
                if (proper && v * x % p == 1) { root = x; break; }
            }
            if (root == 0) throw BadPrime("no order-" + std::to_string(m) + " root mod p");
            Scalar acc = Scalar::zero(target);
            Scalar zp = Scalar::from_int(target, root);
            for (size_t i = 0; i < s.coeffs().size(); ++i)
                acc = acc + Scalar::from_rat(target, s.coeffs()[i]) * zp.pow(static_cast<long>(i));
            return acc;
        }
    }
    throw BadPrime("unreachable");
}

ExactMatrix specialize_mod_p(const ExactMatrix& m, long p) {
    if (m.field().dual()) throw FieldMismatch("cannot specialize an eps-extension");
    ExactMatrix r(Field::prime(p), m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) r.at(i, j) = specialize_scalar_mod_p(m.at(i, j), p);
    return r;
}

bool solve_linear(const ExactMatrix& m, const ExactMatrix& b, ExactMatrix& x,
                  const std::vector<Scalar>* free_values) {
    if (b.rows() != m.rows() || b.cols() != 1) throw ShapeMismatch("solve shapes");
    ExactMatrix aug = m.hstack(b);
    std::vector<size_t> pivots = rref(aug);
    // Inconsistent if a pivot falls in the last column.
    if (!pivots.empty() && pivots.back() == m.cols()) return false;
    x = ExactMatrix(m.field(), m.cols(), 1);
    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t c : pivots) is_pivot[c] = true;
    for (size_t c = 0; c < m.cols(); ++c)
        if (!is_pivot[c] && free_values)
            x.at(c, 0) = (*free_values)[c];
    for (size_t r = 0; r < pivots.size(); ++r) {
        Scalar v = aug.at(r, m.cols());
        for (size_t c = 0; c < m.cols(); ++c)
            if (!is_pivot[c] && !x.at(c, 0).is_zero())
                v = v - aug.at(r, c) * x.at(c, 0);
        x.at(pivots[r], 0) = v;
    }
    return true;
}

} // namespace mqv
