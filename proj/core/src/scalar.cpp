#include "mqv/scalar.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace mqv {

unsigned euler_phi(unsigned m) {
    unsigned result = m;
    unsigned n = m;
    for (unsigned p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            result -= result / p;
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

namespace {

// Polynomials as ascending coefficient vectors over Int.
std::vector<Int> poly_div_exact(const std::vector<Int>& num, const std::vector<Int>& den) {
    std::vector<Int> rem = num;
    std::vector<Int> quot(num.size() - den.size() + 1, Int(0));
    const size_t dd = den.size() - 1;
    for (size_t i = rem.size(); i-- > den.size() - 1;) {
        if (i < dd) break;
        Int c = rem[i] / den[dd]; // exact for cyclotomic factors
        quot[i - dd] = c;
        for (size_t j = 0; j <= dd; ++j) rem[i - dd + j] -= c * den[j];
    }
    return quot;
}

} // namespace

std::vector<Int> cyclotomic_polynomial(unsigned m) {
    // Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d
    std::vector<Int> num(m + 1, Int(0));
    num[0] = -1;
    num[m] = 1;
    for (unsigned d = 1; d < m; ++d) {
        if (m % d == 0) num = poly_div_exact(num, cyclotomic_polynomial(d));
    }
    return num;
}

namespace {

CycloCtxPtr cyclo_context(unsigned m) {
    static std::map<unsigned, CycloCtxPtr> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    auto ctx = std::make_shared<CycloContext>();
    ctx->m = m;
    ctx->degree = euler_phi(m);
    ctx->minpoly = cyclotomic_polynomial(m);
    cache[m] = ctx;
    return ctx;
}

} // namespace

Field Field::rational() { return Field{}; }

Field Field::cyclotomic(unsigned m) {
    if (m <= 2) return rational(); // Q(zeta_1) = Q(zeta_2) = Q
    Field f;
    f.kind_ = Kind::Cyclotomic;
    f.ctx_ = cyclo_context(m);
    return f;
}

Field Field::prime(long p) {
    if (p < 2) throw BadPrime("characteristic must be a prime >= 2");
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) throw BadPrime("not a prime: " + std::to_string(p));
    Field f;
    f.kind_ = Kind::Prime;
    f.p_ = p;
    return f;
}

Field Field::with_dual() const {
    Field f = *this;
    f.dual_ = true;
    return f;
}

Field Field::base() const {
    Field f = *this;
    f.dual_ = false;
    return f;
}

bool Field::operator==(const Field& o) const {
    return kind_ == o.kind_ && dual_ == o.dual_ && p_ == o.p_ &&
           (kind_ != Kind::Cyclotomic || ctx_->m == o.ctx_->m);
}

std::string Field::describe() const {
    std::string s;
    switch (kind_) {
        case Kind::Rational: s = "Q"; break;
        case Kind::Cyclotomic: s = "Q(zeta_" + std::to_string(ctx_->m) + ")"; break;
        case Kind::Prime: s = "F_" + std::to_string(p_); break;
    }
    if (dual_) s += "[eps]";
    return s;
}

// ---------------------------------------------------------------------------

Scalar Scalar::zero(const Field& f) {
    Scalar s;
    s.field_ = f;
    if (f.kind() == Field::Kind::Cyclotomic) s.cyc_.assign(f.cyclo_degree(), Rat(0));
    if (f.dual()) s.eps_ = std::make_shared<Scalar>(zero(f.base()));
    return s;
}

Scalar Scalar::one(const Field& f) { return from_int(f, 1); }

Scalar Scalar::from_int(const Field& f, long v) { return from_rat(f, Rat(v)); }

Scalar Scalar::from_rat(const Field& f, const Rat& v) {
    Scalar s = zero(f);
    switch (f.kind()) {
        case Field::Kind::Rational: s.rat_ = v; break;
        case Field::Kind::Cyclotomic: s.cyc_[0] = v; break;
        case Field::Kind::Prime: {
            const long p = f.characteristic();
            Int num = numerator(v) % p;
            Int den = denominator(v) % p;
            if (den == 0) throw BadPrime("denominator divisible by " + std::to_string(p));
            long n = static_cast<long>(num);
            long d = static_cast<long>(den);
            n = ((n % p) + p) % p;
            d = ((d % p) + p) % p;
            // d^(p-2) mod p
            long inv = 1, b = d, e = p - 2;
            while (e) {
                if (e & 1) inv = inv * b % p;
                b = b * b % p;
                e >>= 1;
            }
            s.fp_ = n * inv % p;
            break;
        }
    }
    return s;
}

Scalar Scalar::cyclotomic_root(unsigned m, unsigned k) {
    if (m == 0) throw ZeroParameter("root order must be positive");
    k %= m;
    if (m <= 2) return from_int(Field::rational(), (m == 2 && k == 1) ? -1 : 1);
    Field f = Field::cyclotomic(m);
    const unsigned deg = f.cyclo_degree();
    // x^k reduced mod Phi_m
    std::vector<Rat> poly(std::max<unsigned>(k + 1, deg), Rat(0));
    poly[k] = 1;
    const auto& mp = f.ctx().minpoly;
    for (size_t i = poly.size(); i-- > deg;) {
        Rat c = poly[i];
        if (c == 0) continue;
        poly[i] = 0;
        for (unsigned j = 0; j < deg; ++j) poly[i - deg + j] -= c * Rat(mp[j]);
    }
    Scalar s = zero(f);
    for (unsigned i = 0; i < deg; ++i) s.cyc_[i] = poly[i];
    return s;
}

Scalar Scalar::with_eps(const Scalar& value, const Scalar& eps_part) {
    if (value.field() != eps_part.field() || value.field().dual())
        throw FieldMismatch("eps parts must share the base field");
    Scalar s = value;
    s.field_ = value.field().with_dual();
    s.eps_ = std::make_shared<Scalar>(eps_part);
    return s;
}

Scalar Scalar::value_part() const {
    if (!field_.dual()) return *this;
    Scalar s = *this;
    s.field_ = field_.base();
    s.eps_.reset();
    return s;
}

Scalar Scalar::eps_part() const {
    if (!field_.dual()) return zero(field_);
    return eps_ ? *eps_ : zero(field_.base());
}

bool Scalar::base_zero() const {
    switch (field_.kind()) {
        case Field::Kind::Rational: return rat_ == 0;
        case Field::Kind::Prime: return fp_ == 0;
        case Field::Kind::Cyclotomic:
            return std::all_of(cyc_.begin(), cyc_.end(), [](const Rat& c) { return c == 0; });
    }
    return true;
}

bool Scalar::is_zero() const {
    if (field_.dual()) return value_part().is_zero() && eps_part().is_zero();
    return base_zero();
}

bool Scalar::operator==(const Scalar& o) const {
    require_same(*this, o);
    return (*this - o).is_zero();
}

bool Scalar::operator<(const Scalar& o) const {
    require_same(*this, o);
    switch (field_.kind()) {
        case Field::Kind::Rational:
            if (rat_ != o.rat_) return rat_ < o.rat_;
            break;
        case Field::Kind::Prime:
            if (fp_ != o.fp_) return fp_ < o.fp_;
            break;
        case Field::Kind::Cyclotomic:
            if (cyc_ != o.cyc_) return cyc_ < o.cyc_;
            break;
    }
    if (field_.dual()) return eps_part() < o.eps_part();
    return false;
}

void Scalar::require_same(const Scalar& a, const Scalar& b) {
    if (a.field_ != b.field_)
        throw FieldMismatch("scalar fields differ: " + a.field_.describe() + " vs " +
                            b.field_.describe());
}

Scalar Scalar::base_add(const Scalar& o, int sign) const {
    Scalar s = *this;
    switch (field_.kind()) {
        case Field::Kind::Rational:
            if (sign > 0) s.rat_ = rat_ + o.rat_;
            else s.rat_ = rat_ - o.rat_;
            break;
        case Field::Kind::Prime: {
            const long p = field_.characteristic();
            s.fp_ = ((fp_ + sign * o.fp_) % p + p) % p;
            break;
        }
        case Field::Kind::Cyclotomic:
            for (size_t i = 0; i < cyc_.size(); ++i) {
                if (sign > 0) s.cyc_[i] = cyc_[i] + o.cyc_[i];
                else s.cyc_[i] = cyc_[i] - o.cyc_[i];
            }
            break;
    }
    return s;
}

Scalar Scalar::operator+(const Scalar& o) const {
    require_same(*this, o);
    if (field_.dual())
        return with_eps(value_part() + o.value_part(), eps_part() + o.eps_part());
    return base_add(o, +1);
}

Scalar Scalar::operator-(const Scalar& o) const {
    require_same(*this, o);
    if (field_.dual())
        return with_eps(value_part() - o.value_part(), eps_part() - o.eps_part());
    return base_add(o, -1);
}

Scalar Scalar::operator-() const { return zero(field_) - *this; }

Scalar Scalar::base_mul(const Scalar& o) const {
    Scalar s = zero(field_);
    switch (field_.kind()) {
        case Field::Kind::Rational:
            s.rat_ = rat_ * o.rat_;
            break;
        case Field::Kind::Prime:
            s.fp_ = fp_ * o.fp_ % field_.characteristic();
            break;
        case Field::Kind::Cyclotomic: {
            const unsigned deg = field_.cyclo_degree();
            std::vector<Rat> prod(2 * deg - 1, Rat(0));
            for (unsigned i = 0; i < deg; ++i) {
                if (cyc_[i] == 0) continue;
                for (unsigned j = 0; j < deg; ++j)
                    if (o.cyc_[j] != 0) prod[i + j] += cyc_[i] * o.cyc_[j];
            }
            const auto& mp = field_.ctx().minpoly;
            for (size_t i = prod.size(); i-- > deg;) {
                Rat c = prod[i];
                if (c == 0) continue;
                prod[i] = 0;
                for (unsigned j = 0; j < deg; ++j) prod[i - deg + j] -= c * Rat(mp[j]);
            }
            for (unsigned i = 0; i < deg; ++i) s.cyc_[i] = prod[i];
            break;
        }
    }
    return s;
}

Scalar Scalar::operator*(const Scalar& o) const {
    require_same(*this, o);
    if (field_.dual()) {
        Scalar v = value_part() * o.value_part();
        Scalar e = value_part() * o.eps_part() + eps_part() * o.value_part();
        return with_eps(v, e);
    }
    return base_mul(o);
}

namespace {

void poly_trim(std::vector<Rat>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Long division in Q[x]; inputs trimmed, b nonzero.
std::pair<std::vector<Rat>, std::vector<Rat>> poly_divmod(std::vector<Rat> r,
                                                          const std::vector<Rat>& b) {
    std::vector<Rat> q(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, Rat(0));
    while (r.size() >= b.size()) {
        Rat c = r.back() / b.back();
        size_t shift = r.size() - b.size();
        q[shift] += c;
        for (size_t j = 0; j < b.size(); ++j) r[shift + j] -= c * b[j];
        poly_trim(r);
    }
    return {q, r};
}

// Extended Euclid in Q[x]: returns (g, s) with s*f = g mod phi.
std::pair<std::vector<Rat>, std::vector<Rat>> poly_half_gcd(std::vector<Rat> a,
                                                            std::vector<Rat> b) {
    poly_trim(a);
    poly_trim(b);
    std::vector<Rat> s0{Rat(1)}, s1;
    while (!b.empty()) {
        auto [q, r] = poly_divmod(a, b);
        std::vector<Rat> s_new = s0;
        for (size_t i = 0; i < q.size(); ++i) {
            if (q[i] == 0) continue;
            for (size_t j = 0; j < s1.size(); ++j) {
                if (i + j >= s_new.size()) s_new.resize(i + j + 1, Rat(0));
                s_new[i + j] -= q[i] * s1[j];
            }
        }
        poly_trim(s_new);
        a = std::move(b);
        b = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s_new);
    }
    return {a, s0};
}

} // namespace

Scalar Scalar::base_inverse() const {
    if (base_zero()) throw ZeroParameter("inverse of zero");
    Scalar s = zero(field_);
    switch (field_.kind()) {
        case Field::Kind::Rational:
            s.rat_ = Rat(1) / rat_;
            break;
        case Field::Kind::Prime: {
            const long p = field_.characteristic();
            long inv = 1, b = fp_, e = p - 2;
            while (e) {
                if (e & 1) inv = inv * b % p;
                b = b * b % p;
                e >>= 1;
            }
            s.fp_ = inv;
            break;
        }
        case Field::Kind::Cyclotomic: {
            const unsigned deg = field_.cyclo_degree();
            std::vector<Rat> phi(deg + 1);
            for (unsigned i = 0; i <= deg; ++i) phi[i] = Rat(field_.ctx().minpoly[i]);
            std::vector<Rat> f(cyc_.begin(), cyc_.end());
            auto [g, bez] = poly_half_gcd(f, phi);
            // g is a nonzero constant since Phi_m is irreducible
            if (g.size() != 1 || g[0] == 0)
                throw ZeroParameter("cyclotomic inverse failed (non-constant gcd)");
            Rat c = g[0];
            s.cyc_.assign(deg, Rat(0));
            for (size_t i = 0; i < bez.size() && i < deg; ++i) s.cyc_[i] = bez[i] / c;
            // bez may exceed degree; reduce if needed
            if (bez.size() > deg) {
                std::vector<Rat> prod(bez.size(), Rat(0));
                for (size_t i = 0; i < bez.size(); ++i) prod[i] = bez[i] / c;
                const auto& mp = field_.ctx().minpoly;
                for (size_t i = prod.size(); i-- > deg;) {
                    Rat cc = prod[i];
                    if (cc == 0) continue;
                    prod[i] = 0;
                    for (unsigned j = 0; j < deg; ++j) prod[i - deg + j] -= cc * Rat(mp[j]);
                }
                for (unsigned i = 0; i < deg; ++i) s.cyc_[i] = prod[i];
            }
            break;
        }
    }
    return s;
}

bool Scalar::is_invertible() const {
    if (field_.dual()) return !value_part().base_zero();
    return !base_zero();
}

Scalar Scalar::inverse() const {
    if (field_.dual()) {
        // (a + b eps)^{-1} = a^{-1} - a^{-2} b eps
        Scalar a_inv = value_part().inverse();
        return with_eps(a_inv, -(a_inv * a_inv * eps_part()));
    }
    return base_inverse();
}

Scalar Scalar::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar acc = one(field_);
    Scalar b = *this;
    while (e) {
        if (e & 1) acc = acc * b;
        b = b * b;
        e >>= 1;
    }
    return acc;
}

std::string Scalar::str() const {
    if (field_.dual()) return value_part().str() + " + eps*" + eps_part().str();
    std::ostringstream os;
    switch (field_.kind()) {
        case Field::Kind::Rational:
            os << numerator(rat_);
            if (denominator(rat_) != 1) os << "/" << denominator(rat_);
            break;
        case Field::Kind::Prime:
            os << field_.characteristic() << ":" << fp_;
            break;
        case Field::Kind::Cyclotomic: {
            os << "(" << field_.cyclo_order() << "; ";
            for (size_t i = 0; i < cyc_.size(); ++i) {
                if (i) os << ",";
                os << numerator(cyc_[i]);
                if (denominator(cyc_[i]) != 1) os << "/" << denominator(cyc_[i]);
            }
            os << ")";
            break;
        }
    }
    return os.str();
}

namespace {

Rat parse_rat(const std::string& text, size_t pos_hint) {
    try {
        size_t slash = text.find('/');
        if (slash == std::string::npos) return Rat(Int(text));
        return Rat(Int(text.substr(0, slash)), Int(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw ParseError("bad rational literal '" + text + "' at position " +
                         std::to_string(pos_hint));
    }
}

} // namespace

Scalar Scalar::parse(const Field& f, const std::string& raw) {
    std::string text;
    for (char c : raw)
        if (!isspace(static_cast<unsigned char>(c))) text += c;
    if (text.empty()) throw ParseError("empty scalar literal");
    if (f.dual()) throw ParseError("dual scalars have no file syntax");
    if (text[0] == '(') {
        if (f.kind() != Field::Kind::Cyclotomic)
            throw ParseError("cyclotomic literal in non-cyclotomic field");
        size_t semi = text.find(';');
        size_t close = text.rfind(')');
        if (semi == std::string::npos || close == std::string::npos)
            throw ParseError("malformed cyclotomic literal '" + raw + "'");
        unsigned m = static_cast<unsigned>(std::stoul(text.substr(1, semi - 1)));
        if (m != f.cyclo_order())
            throw ParseError("cyclotomic order mismatch in '" + raw + "'");
        Scalar s = zero(f);
        std::string body = text.substr(semi + 1, close - semi - 1);
        size_t start = 0;
        unsigned idx = 0;
        while (start <= body.size() && idx < f.cyclo_degree()) {
            size_t comma = body.find(',', start);
            std::string piece =
                comma == std::string::npos ? body.substr(start) : body.substr(start, comma - start);
            s.cyc_[idx++] = parse_rat(piece, start);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (idx != f.cyclo_degree())
            throw ParseError("expected " + std::to_string(f.cyclo_degree()) +
                             " coefficients in '" + raw + "'");
        return s;
    }
    size_t colon = text.find(':');
    if (colon != std::string::npos && f.kind() == Field::Kind::Prime) {
        long p = std::stol(text.substr(0, colon));
        if (p != f.characteristic()) throw ParseError("characteristic mismatch in '" + raw + "'");
        long r = std::stol(text.substr(colon + 1));
        if (r < 0 || r >= p) throw ParseError("non-canonical residue in '" + raw + "'");
        Scalar s = zero(f);
        s.fp_ = r;
        return s;
    }
    return from_rat(f, parse_rat(text, 0));
}

} // namespace mqv
