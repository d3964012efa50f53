#include "mqv/ncpath.hpp"

#include <cctype>
#include <sstream>

namespace mqv {

bool Mono::operator<(const Mono& o) const {
    if (degree() != o.degree()) return degree() < o.degree();
    if (arrows != o.arrows) return arrows < o.arrows;
    if (tpow != o.tpow) return tpow < o.tpow;
    bool e1 = arrows.empty(), e2 = o.arrows.empty();
    if (e1 && e2) return vertex < o.vertex;
    return false;
}

PathPoly PathPoly::idempotent(PathCtxPtr ctx, int vertex) {
    PathPoly p(ctx);
    p.add_term(Mono{vertex, {}, 0}, Scalar::one(ctx->field));
    return p;
}

PathPoly PathPoly::unit(PathCtxPtr ctx) {
    PathPoly p(ctx);
    for (int i = 0; i < ctx->qd.num_vertices(); ++i)
        p.add_term(Mono{i, {}, 0}, Scalar::one(ctx->field));
    return p;
}

PathPoly PathPoly::arrow(PathCtxPtr ctx, int h) {
    PathPoly p(ctx);
    p.add_term(Mono{0, {h}, 0}, Scalar::one(ctx->field));
    return p;
}

PathPoly PathPoly::t(PathCtxPtr ctx) {
    PathPoly p(ctx);
    for (int i = 0; i < ctx->qd.num_vertices(); ++i)
        p.add_term(Mono{i, {}, 1}, Scalar::one(ctx->field));
    return p;
}

PathPoly PathPoly::scalar(PathCtxPtr ctx, const Scalar& c) {
    PathPoly p = unit(ctx);
    return p * c;
}

void PathPoly::add_term(const Mono& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

PathPoly PathPoly::operator+(const PathPoly& o) const {
    PathPoly r = *this;
    if (!r.ctx_) r.ctx_ = o.ctx_;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

PathPoly PathPoly::operator-(const PathPoly& o) const {
    PathPoly r = *this;
    if (!r.ctx_) r.ctx_ = o.ctx_;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

PathPoly PathPoly::operator-() const {
    PathPoly r(ctx_);
    for (const auto& [m, c] : terms_) r.add_term(m, -c);
    return r;
}

namespace {

// Monomial composition under the left-to-right reading; returns false when
// the product vanishes (vertex mismatch).
bool compose(const DoubledQuiver& qd, const Mono& a, const Mono& b, Mono& out) {
    if (a.end(qd) != b.start(qd)) return false;
    out.arrows = a.arrows;
    out.arrows.insert(out.arrows.end(), b.arrows.begin(), b.arrows.end());
    out.tpow = a.tpow + b.tpow;
    out.vertex = out.arrows.empty() ? a.start(qd) : 0;
    return true;
}

} // namespace

PathPoly PathPoly::operator*(const PathPoly& o) const {
    PathPoly r(ctx_ ? ctx_ : o.ctx_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            Mono prod;
            if (compose(r.ctx_->qd, ma, mb, prod)) r.add_term(prod, ca * cb);
        }
    return r;
}

PathPoly PathPoly::operator*(const Scalar& c) const {
    PathPoly r(ctx_);
    for (const auto& [m, cc] : terms_) r.add_term(m, cc * c);
    return r;
}

PathPoly PathPoly::left_idem(int i) const {
    PathPoly r(ctx_);
    for (const auto& [m, c] : terms_)
        if (m.start(ctx_->qd) == i) r.add_term(m, c);
    return r;
}

PathPoly PathPoly::right_idem(int i) const {
    PathPoly r(ctx_);
    for (const auto& [m, c] : terms_)
        if (m.end(ctx_->qd) == i) r.add_term(m, c);
    return r;
}

std::optional<int> PathPoly::homogeneous_degree() const {
    std::optional<int> deg;
    for (const auto& [m, c] : terms_) {
        if (!deg) deg = m.degree();
        else if (*deg != m.degree()) return std::nullopt;
    }
    return deg;
}

std::string PathPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str() << "*";
        if (m.arrows.empty()) os << "e(" << ctx_->qd.base.vertices[m.vertex] << ")";
        for (size_t k = 0; k < m.arrows.size(); ++k)
            os << (k ? "." : "") << ctx_->qd.arrow_name(m.arrows[k]);
        if (m.tpow) os << (m.arrows.empty() ? "" : ".") << "t^" << m.tpow;
    }
    return os.str();
}

// ---------------------------------------------------------------------------

int Slot::left_attach(const DoubledQuiver& qd) const {
    switch (kind) {
        case Kind::Arrow: return qd.src(index);
        case Kind::ArrowDual: return qd.tgt(index);
        default: return index;
    }
}

int Slot::right_attach(const DoubledQuiver& qd) const {
    switch (kind) {
        case Kind::Arrow: return qd.tgt(index);
        case Kind::ArrowDual: return qd.src(index);
        default: return index;
    }
}

bool BimodElem::Term::operator<(const Term& o) const {
    if (!(slot == o.slot)) return slot < o.slot;
    if (!(left < o.left) && !(o.left < left)) return right < o.right;
    return left < o.left;
}

BimodElem BimodElem::pure_slot(PathCtxPtr ctx, const Slot& s) {
    BimodElem b(ctx);
    int lv = s.left_attach(ctx->qd), rv = s.right_attach(ctx->qd);
    b.add_term(Mono{lv, {}, 0}, s, Mono{rv, {}, 0}, Scalar::one(ctx->field));
    return b;
}

void BimodElem::add_term(Mono left, const Slot& s, Mono right, const Scalar& c) {
    if (c.is_zero()) return;
    const auto& qd = ctx_->qd;
    if (left.end(qd) != s.left_attach(qd)) return;  // slot-incompatible => 0
    if (right.start(qd) != s.right_attach(qd)) return;
    right.tpow += left.tpow; // t slides across the slot
    left.tpow = 0;
    Term t{std::move(left), s, std::move(right)};
    auto it = terms_.find(t);
    if (it == terms_.end()) {
        terms_.emplace(std::move(t), c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

BimodElem BimodElem::operator+(const BimodElem& o) const {
    BimodElem r = *this;
    if (!r.ctx_) r.ctx_ = o.ctx_;
    for (const auto& [t, c] : o.terms_) r.add_term(t.left, t.slot, t.right, c);
    return r;
}

BimodElem BimodElem::operator-(const BimodElem& o) const {
    BimodElem r = *this;
    if (!r.ctx_) r.ctx_ = o.ctx_;
    for (const auto& [t, c] : o.terms_) r.add_term(t.left, t.slot, t.right, -c);
    return r;
}

BimodElem BimodElem::operator*(const Scalar& c) const {
    BimodElem r(ctx_);
    for (const auto& [t, cc] : terms_) r.add_term(t.left, t.slot, t.right, cc * c);
    return r;
}

BimodElem BimodElem::lmul(const PathPoly& p) const {
    BimodElem r(ctx_);
    for (const auto& [mp, cp] : p.terms())
        for (const auto& [t, c] : terms_) {
            Mono prod;
            if (compose(ctx_->qd, mp, t.left, prod)) r.add_term(prod, t.slot, t.right, cp * c);
        }
    return r;
}

BimodElem BimodElem::rmul(const PathPoly& p) const {
    BimodElem r(ctx_);
    for (const auto& [t, c] : terms_)
        for (const auto& [mp, cp] : p.terms()) {
            Mono prod;
            if (compose(ctx_->qd, t.right, mp, prod)) r.add_term(t.left, t.slot, prod, c * cp);
        }
    return r;
}

std::string BimodElem::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    const auto& qd = ctx_->qd;
    for (const auto& [t, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        auto mono_str = [&](const Mono& m) {
            std::string s;
            if (m.arrows.empty()) s = "e(" + qd.base.vertices[m.vertex] + ")";
            for (size_t k = 0; k < m.arrows.size(); ++k)
                s += (k ? "." : "") + qd.arrow_name(m.arrows[k]);
            if (m.tpow) s += ".t^" + std::to_string(m.tpow);
            return s;
        };
        os << c.str() << "*" << mono_str(t.left) << " (x) ";
        switch (t.slot.kind) {
            case Slot::Kind::Arrow: os << "eta[" << qd.arrow_name(t.slot.index) << "]"; break;
            case Slot::Kind::ArrowDual:
                os << "eta^[" << qd.arrow_name(t.slot.index) << "]";
                break;
            case Slot::Kind::Vertex:
                os << "eta[" << qd.base.vertices[t.slot.index] << "]";
                break;
            case Slot::Kind::VertexDual:
                os << "eta^[" << qd.base.vertices[t.slot.index] << "]";
                break;
        }
        os << " (x) " << mono_str(t.right);
    }
    return os.str();
}

BimodElem derive(const PathPoly& p) {
    BimodElem out(p.ctx());
    const auto& qd = p.ctx()->qd;
    for (const auto& [m, c] : p.terms()) {
        // delta(h_1...h_k t^d) = sum_j h_1..h_{j-1} (x) eta_{h_j} (x) h_{j+1}..h_k t^d
        for (size_t j = 0; j < m.arrows.size(); ++j) {
            Mono left{0, {m.arrows.begin(), m.arrows.begin() + j}, 0};
            if (left.arrows.empty()) left.vertex = qd.src(m.arrows[j]);
            Mono right{0, {m.arrows.begin() + j + 1, m.arrows.end()}, m.tpow};
            if (right.arrows.empty()) right.vertex = qd.tgt(m.arrows[j]);
            out.add_term(std::move(left), Slot{Slot::Kind::Arrow, m.arrows[j]},
                         std::move(right), c);
        }
    }
    return out;
}

RelationElements build_relation(PathCtxPtr ctx, const std::vector<Scalar>& q) {
    const auto& qd = ctx->qd;
    if (static_cast<int>(q.size()) != qd.num_vertices())
        throw IndexMismatch("q must have one entry per vertex");
    for (const auto& qi : q)
        if (qi.is_zero()) throw ZeroParameter("q entries must be nonzero");

    RelationElements rel;
    rel.ctx = ctx;
    rel.q = q;
    const int g = qd.g();
    PathPoly one = PathPoly::unit(ctx);
    PathPoly t2 = PathPoly::t(ctx) * PathPoly::t(ctx);

    rel.G.resize(2 * g, PathPoly::zero(ctx));
    for (int h = 0; h < 2 * g; ++h)
        rel.G[h] = t2 + PathPoly::arrow(ctx, h) * PathPoly::arrow(ctx, qd.star(h));

    rel.L.assign(2 * g, one);
    rel.R.assign(2 * g, one);
    for (int j = 0; j < g; ++j) {
        PathPoly acc = one;
        for (int k = 0; k < j; ++k) acc = acc * rel.G[k];
        rel.L[j] = acc; // L_{a_j} = G_{a_1}...G_{a_{j-1}}
        acc = one;
        for (int k = j + 1; k < g; ++k) acc = acc * rel.G[k];
        rel.R[j] = acc; // R_{a_j} = G_{a_{j+1}}...G_{a_g}
        acc = one;
        for (int k = g - 1; k > j; --k) acc = acc * rel.G[g + k];
        rel.L[g + j] = acc; // L_{a_j*} = G_{a_g*}...G_{a_{j+1}*}
        acc = one;
        for (int k = j - 1; k >= 0; --k) acc = acc * rel.G[g + k];
        rel.R[g + j] = acc; // R_{a_j*} = G_{a_{j-1}*}...G_{a_1*}
    }

    PathPoly qelem(ctx);
    for (int i = 0; i < qd.num_vertices(); ++i)
        qelem = qelem + PathPoly::idempotent(ctx, i) * q[i];

    PathPoly D = one;
    for (int j = 0; j < g; ++j) D = D * rel.G[j];
    PathPoly Dstar = qelem;
    for (int j = g - 1; j >= 0; --j) Dstar = Dstar * rel.G[g + j];
    rel.D = D;
    rel.Dstar = Dstar;
    rel.rho = D - Dstar;
    return rel;
}

Differentials differential_components(const RelationElements& rel) {
    const auto& ctx = rel.ctx;
    const auto& qd = ctx->qd;
    const int g = qd.g();
    Differentials d;

    // beta(eta_h) = h eta_{s(h)} - eta_{t(h)} h
    for (int h = 0; h < 2 * g; ++h) {
        BimodElem es = BimodElem::pure_slot(ctx, Slot{Slot::Kind::Vertex, qd.src(h)});
        BimodElem et = BimodElem::pure_slot(ctx, Slot{Slot::Kind::Vertex, qd.tgt(h)});
        PathPoly a = PathPoly::arrow(ctx, h);
        d.beta.push_back(es.lmul(a) - et.rmul(a));
    }

    // alpha(eta_i) = sum_{a in Omega, s(a)=i} L_a Delta_a R_a
    //              - sum_{a in Omega, t(a)=i} q_{t(a)} L_{a*} Delta_{a*} R_{a*}
    for (int i = 0; i < qd.num_vertices(); ++i) {
        BimodElem acc(ctx);
        for (int j = 0; j < g; ++j) {
            if (qd.src(j) == i) {
                BimodElem delta = derive(rel.G[j]);
                acc = acc + delta.lmul(rel.L[j]).rmul(rel.R[j]);
            }
            if (qd.tgt(j) == i) {
                BimodElem delta = derive(rel.G[g + j]);
                acc = acc - delta.lmul(rel.L[g + j]).rmul(rel.R[g + j]) * rel.q[qd.tgt(j)];
            }
        }
        d.alpha.push_back(acc);
    }

    // alpha_vee(eta_a^vee), the two-case formula distinguishing Omega from its bar
    for (int h = 0; h < 2 * g; ++h) {
        const int j = h % g; // underlying ordered arrow a_j
        PathPoly astar = PathPoly::arrow(ctx, qd.star(h));
        if (h < g) {
            // a* R_a eta_{s(a)}^vee L_a - q R_{a*} eta_{t(a)}^vee L_{a*} a*
            BimodElem s1 = BimodElem::pure_slot(ctx, Slot{Slot::Kind::VertexDual, qd.src(h)});
            BimodElem s2 = BimodElem::pure_slot(ctx, Slot{Slot::Kind::VertexDual, qd.tgt(h)});
            d.alpha_dual.push_back(
                s1.lmul(astar * rel.R[j]).rmul(rel.L[j]) -
                s2.lmul(rel.R[g + j]).rmul(rel.L[g + j] * astar) * rel.q[qd.tgt(h)]);
        } else {
            // R_{a*} eta_{t(h)}^vee L_{a*} a - q a R_a ... with h = a*, a = h*:
            // alpha_vee(eta_{a*}^vee) = R_a eta_{s(a)}^vee L_a a - q a R_{a*} eta_{t(a)}^vee L_{a*}
            const int a = qd.star(h);
            PathPoly pa = PathPoly::arrow(ctx, a);
            BimodElem s1 = BimodElem::pure_slot(ctx, Slot{Slot::Kind::VertexDual, qd.src(a)});
            BimodElem s2 = BimodElem::pure_slot(ctx, Slot{Slot::Kind::VertexDual, qd.tgt(a)});
            d.alpha_dual.push_back(
                s1.lmul(rel.R[j]).rmul(rel.L[j] * pa) -
                s2.lmul(pa * rel.R[g + j]).rmul(rel.L[g + j]) * rel.q[qd.tgt(a)]);
        }
    }
    return d;
}

bool IdentityReport::all_pass() const {
    for (const auto& e : entries)
        if (!e.pass) return false;
    return true;
}

IdentityReport identity_suite(PathCtxPtr ctx, const std::vector<Scalar>& q,
                              const PathPoly* rho_override) {
    IdentityReport rep;
    const auto& qd = ctx->qd;
    RelationElements rel = build_relation(ctx, q);
    const PathPoly& rho = rho_override ? *rho_override : rel.rho;
    const int g = qd.g();

    // (1) G_a a = a G_{a*} and a* G_a = G_{a*} a*
    for (int h = 0; h < 2 * g; ++h) {
        PathPoly a = PathPoly::arrow(ctx, h);
        PathPoly as = PathPoly::arrow(ctx, qd.star(h));
        bool p1 = (rel.G[h] * a - a * rel.G[qd.star(h)]).is_zero();
        bool p2 = (as * rel.G[h] - rel.G[qd.star(h)] * as).is_zero();
        rep.entries.push_back({"G_compose_" + qd.arrow_name(h), p1 && p2,
                               p1 && p2 ? "" : "commutation with G failed"});
    }

    // (2) Peirce diagonality of rho
    {
        bool diag = true;
        PathPoly diag_sum(ctx);
        for (int i = 0; i < qd.num_vertices(); ++i) {
            for (int j = 0; j < qd.num_vertices(); ++j) {
                PathPoly comp = rho.left_idem(i).right_idem(j);
                if (i != j && !comp.is_zero()) diag = false;
                if (i == j) diag_sum = diag_sum + comp;
            }
        }
        bool total = (diag_sum - rho).is_zero();
        rep.entries.push_back({"rho_peirce_diagonal", diag && total,
                               diag && total ? "" : "off-diagonal Peirce component"});
    }

    // (3) alpha(eta_i) = e_i delta(rho)
    {
        Differentials d = differential_components(rel);
        BimodElem drho = derive(rho);
        bool ok = true;
        for (int i = 0; i < qd.num_vertices(); ++i) {
            BimodElem lhs = d.alpha[i];
            BimodElem rhs = drho.lmul(PathPoly::idempotent(ctx, i));
            if (!(lhs - rhs).is_zero()) ok = false;
        }
        rep.entries.push_back({"alpha_equals_e_delta_rho", ok,
                               ok ? "" : "alpha(eta_i) != e_i delta(rho)"});
    }

    // (4) rho homogeneous of degree 2g
    {
        auto deg = rho.homogeneous_degree();
        bool ok = deg.has_value() && *deg == 2 * g;
        rep.entries.push_back({"rho_degree_2g", ok,
                               ok ? "" : "rho not homogeneous of degree 2g"});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Expression parser

namespace {

struct Token {
    enum class Kind { Num, Ident, StarIdent, T, E, Plus, Minus, Times, Pow, LParen, RParen, End };
    Kind kind;
    std::string text;
    size_t pos;
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        size_t start = i;
        if (isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (i < s.size() && (isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/'))
                num += s[i++];
            out.push_back({Token::Kind::Num, num, start});
            continue;
        }
        if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (i < s.size() &&
                   (isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                id += s[i++];
            if (id == "t") { out.push_back({Token::Kind::T, id, start}); continue; }
            if (id == "e" && i < s.size() && s[i] == '(') {
                out.push_back({Token::Kind::E, id, start});
                continue;
            }
            // a '*' glued to the name is the star partner, not multiplication
            if (i < s.size() && s[i] == '*') {
                ++i;
                out.push_back({Token::Kind::StarIdent, id, start});
            } else {
                out.push_back({Token::Kind::Ident, id, start});
            }
            continue;
        }
        switch (c) {
            case '+': out.push_back({Token::Kind::Plus, "+", start}); break;
            case '-': out.push_back({Token::Kind::Minus, "-", start}); break;
            case '*': out.push_back({Token::Kind::Times, "*", start}); break;
            case '^': out.push_back({Token::Kind::Pow, "^", start}); break;
            case '(': out.push_back({Token::Kind::LParen, "(", start}); break;
            case ')': out.push_back({Token::Kind::RParen, ")", start}); break;
            default:
                throw ParseError("unexpected character '" + std::string(1, c) +
                                 "' at position " + std::to_string(start));
        }
        ++i;
    }
    out.push_back({Token::Kind::End, "", s.size()});
    return out;
}

class ExprParser {
public:
    ExprParser(PathCtxPtr ctx, const std::string& text)
        : ctx_(std::move(ctx)), tokens_(lex(text)) {}

    PathPoly parse() {
        PathPoly p = expr();
        expect(Token::Kind::End, "end of input");
        return p;
    }

private:
    PathCtxPtr ctx_;
    std::vector<Token> tokens_;
    size_t at_ = 0;

    const Token& peek() const { return tokens_[at_]; }
    Token take() { return tokens_[at_++]; }
    void expect(Token::Kind k, const std::string& what) {
        if (peek().kind != k)
            throw ParseError("expected " + what + " at position " +
                             std::to_string(peek().pos));
        take();
    }

    int arrow_index(const std::string& name, bool starred, size_t pos) {
        const auto& qd = ctx_->qd;
        for (int h = 0; h < qd.g(); ++h)
            if (qd.base.arrows[h].name == name) return starred ? qd.star(h) : h;
        throw ParseError("unknown arrow '" + name + "' at position " + std::to_string(pos));
    }

    PathPoly expr() {
        int sign = 1;
        if (peek().kind == Token::Kind::Minus) { take(); sign = -1; }
        PathPoly acc = term();
        if (sign < 0) acc = -acc;
        while (peek().kind == Token::Kind::Plus || peek().kind == Token::Kind::Minus) {
            bool minus = take().kind == Token::Kind::Minus;
            PathPoly t = term();
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }

    PathPoly term() {
        PathPoly acc = factor();
        while (peek().kind == Token::Kind::Times) {
            size_t pos = take().pos;
            PathPoly f = factor();
            PathPoly prod = acc * f;
            // single composable words only: report vanishing word products
            if (prod.is_zero() && acc.terms().size() == 1 && f.terms().size() == 1 &&
                !acc.terms().begin()->first.arrows.empty() &&
                !f.terms().begin()->first.arrows.empty())
                throw NonComposable("non-composable word at position " + std::to_string(pos));
            acc = prod;
        }
        return acc;
    }

    PathPoly factor() {
        PathPoly base = atom();
        if (peek().kind == Token::Kind::Pow) {
            size_t pos = take().pos;
            if (peek().kind != Token::Kind::Num)
                throw ParseError("expected exponent at position " + std::to_string(peek().pos));
            Token e = take();
            long n = 0;
            try {
                n = std::stol(e.text);
            } catch (...) {
                throw ParseError("bad exponent at position " + std::to_string(pos));
            }
            if (n < 0) throw ParseError("negative exponent at position " + std::to_string(pos));
            PathPoly acc = PathPoly::unit(ctx_);
            for (long k = 0; k < n; ++k) acc = acc * base;
            return acc;
        }
        return base;
    }

    PathPoly atom() {
        Token tk = peek();
        switch (tk.kind) {
            case Token::Kind::Num: {
                take();
                Rat r;
                try {
                    size_t slash = tk.text.find('/');
                    r = slash == std::string::npos
                            ? Rat(Int(tk.text))
                            : Rat(Int(tk.text.substr(0, slash)), Int(tk.text.substr(slash + 1)));
                } catch (...) {
                    throw ParseError("bad literal at position " + std::to_string(tk.pos));
                }
                return PathPoly::scalar(ctx_, Scalar::from_rat(ctx_->field, r));
            }
            case Token::Kind::T:
                take();
                return PathPoly::t(ctx_);
            case Token::Kind::E: {
                take();
                expect(Token::Kind::LParen, "'('");
                if (peek().kind != Token::Kind::Ident && peek().kind != Token::Kind::Num)
                    throw ParseError("expected vertex at position " + std::to_string(peek().pos));
                Token v = take();
                expect(Token::Kind::RParen, "')'");
                return PathPoly::idempotent(ctx_, ctx_->qd.base.vertex_index(v.text));
            }
            case Token::Kind::Ident:
            case Token::Kind::StarIdent: {
                take();
                int h = arrow_index(tk.text, tk.kind == Token::Kind::StarIdent, tk.pos);
                return PathPoly::arrow(ctx_, h);
            }
            case Token::Kind::LParen: {
                take();
                PathPoly inner = expr();
                expect(Token::Kind::RParen, "')'");
                return inner;
            }
            default:
                throw ParseError("unexpected token at position " + std::to_string(tk.pos));
        }
    }
};

} // namespace

PathPoly parse_path_expr(PathCtxPtr ctx, const std::string& text) {
    return ExprParser(std::move(ctx), text).parse();
}

} // namespace mqv
