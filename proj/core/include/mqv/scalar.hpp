#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <memory>
#include <string>
#include <vector>

#include "mqv/errors.hpp"

namespace mqv {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Precomputed data for the cyclotomic field Q(zeta_m): the m-th cyclotomic
/// polynomial and its degree phi(m).  Shared, immutable.
struct CycloContext {
    unsigned m = 1;
    unsigned degree = 1;                 // phi(m)
    std::vector<Int> minpoly;            // Phi_m, monic, length degree+1
};

using CycloCtxPtr = std::shared_ptr<const CycloContext>;

/// Field descriptor.  A square-zero epsilon extension can be layered on top
/// of any of the three base kinds.
class Field {
public:
    enum class Kind { Rational, Cyclotomic, Prime };

    static Field rational();
    static Field cyclotomic(unsigned m);
    static Field prime(long p);
    Field with_dual() const;
    Field base() const;                  // strips the epsilon layer

    Kind kind() const { return kind_; }
    bool dual() const { return dual_; }
    unsigned cyclo_order() const { return ctx_ ? ctx_->m : 1; }
    unsigned cyclo_degree() const { return ctx_ ? ctx_->degree : 1; }
    long characteristic() const { return p_; }
    const CycloContext& ctx() const { return *ctx_; }

    bool operator==(const Field& o) const;
    bool operator!=(const Field& o) const { return !(*this == o); }
    std::string describe() const;

private:
    Kind kind_ = Kind::Rational;
    bool dual_ = false;
    long p_ = 0;
    CycloCtxPtr ctx_;
};

/// One exact field element.  Payload depends on the field kind:
/// rational -> rat; cyclotomic -> coefficient vector of length phi(m),
/// reduced mod Phi_m; prime -> canonical representative in [0,p).
/// With the dual flag the element is value + eps * eps_part, eps^2 = 0.
class Scalar {
public:
    Scalar() = default;
    static Scalar zero(const Field& f);
    static Scalar one(const Field& f);
    static Scalar from_int(const Field& f, long v);
    static Scalar from_rat(const Field& f, const Rat& v); // embeds Q into f
    static Scalar cyclotomic_root(unsigned m, unsigned k); // zeta_m^k
    static Scalar with_eps(const Scalar& value, const Scalar& eps_part);

    const Field& field() const { return field_; }
    bool is_zero() const;
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    bool operator<(const Scalar& o) const; // arbitrary strict order, for maps

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator-() const;
    Scalar operator*(const Scalar& o) const;
    Scalar inverse() const;              // throws ZeroParameter on 0 / eps-singular
    Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }
    Scalar pow(long e) const;            // negative e allowed for invertibles

    bool is_invertible() const;

    /// Base-field projections of a dual scalar (identity when not dual).
    Scalar value_part() const;
    Scalar eps_part() const;

    /// Canonical text form: "n/d" (d omitted when 1), "(m; c0,...)", "p:r".
    std::string str() const;
    static Scalar parse(const Field& f, const std::string& text);

    /// Only for rational scalars.
    const Rat& rat() const { return rat_; }
    /// Only for prime scalars.
    long fp() const { return fp_; }
    /// Only for cyclotomic scalars.
    const std::vector<Rat>& coeffs() const { return cyc_; }

private:
    Field field_;
    Rat rat_;
    std::vector<Rat> cyc_;
    long fp_ = 0;
    // epsilon part, empty for non-dual fields
    std::shared_ptr<const Scalar> eps_;

    static void require_same(const Scalar& a, const Scalar& b);
    Scalar base_add(const Scalar& o, int sign) const;
    Scalar base_mul(const Scalar& o) const;
    Scalar base_inverse() const;
    bool base_zero() const;
};

/// Euler phi, used for cyclotomic degrees.
unsigned euler_phi(unsigned m);

/// Coefficients of the m-th cyclotomic polynomial (monic, ascending).
std::vector<Int> cyclotomic_polynomial(unsigned m);

} // namespace mqv
