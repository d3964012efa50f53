#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mqv/matrix.hpp"
#include "mqv/quiver.hpp"

namespace mqv {

/// Shared context for symbolic calculus in kQ^dbl[t].
struct PathCtx {
    DoubledQuiver qd;
    Field field;
};
using PathCtxPtr = std::shared_ptr<const PathCtx>;

/// One monomial: a vertex-composable arrow word (left-to-right reading,
/// e_{s(a)} a e_{t(a)} = a) times a central t-power.  The empty word carries
/// its vertex.  Degree = word length + t-power.
struct Mono {
    int vertex = 0;          // meaningful when arrows is empty
    std::vector<int> arrows; // indices into the double's arrow set H
    int tpow = 0;

    int degree() const { return static_cast<int>(arrows.size()) + tpow; }
    int start(const DoubledQuiver& qd) const {
        return arrows.empty() ? vertex : qd.src(arrows.front());
    }
    int end(const DoubledQuiver& qd) const {
        return arrows.empty() ? vertex : qd.tgt(arrows.back());
    }
    bool operator<(const Mono& o) const;
    bool operator==(const Mono& o) const {
        return arrows == o.arrows && tpow == o.tpow &&
               (!arrows.empty() || vertex == o.vertex);
    }
};

/// Normalized element of kQ^dbl[t]: like monomials merged, zero coefficients
/// dropped, t-powers folded.  Products of non-composable words vanish.
class PathPoly {
public:
    PathPoly() = default;
    explicit PathPoly(PathCtxPtr ctx) : ctx_(std::move(ctx)) {}

    static PathPoly zero(PathCtxPtr ctx) { return PathPoly(std::move(ctx)); }
    static PathPoly idempotent(PathCtxPtr ctx, int vertex); // e_i
    static PathPoly unit(PathCtxPtr ctx);                   // sum_i e_i
    static PathPoly arrow(PathCtxPtr ctx, int h);
    static PathPoly t(PathCtxPtr ctx);                      // central degree-1 t
    static PathPoly scalar(PathCtxPtr ctx, const Scalar& c);

    const PathCtxPtr& ctx() const { return ctx_; }
    const std::map<Mono, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    PathPoly operator+(const PathPoly& o) const;
    PathPoly operator-(const PathPoly& o) const;
    PathPoly operator-() const;
    PathPoly operator*(const PathPoly& o) const;
    PathPoly operator*(const Scalar& c) const;
    bool operator==(const PathPoly& o) const { return terms_ == o.terms_; }

    /// e_i * p and p * e_i.
    PathPoly left_idem(int i) const;
    PathPoly right_idem(int i) const;

    /// Degree when homogeneous, nullopt otherwise.
    std::optional<int> homogeneous_degree() const;

    void add_term(const Mono& m, const Scalar& c);
    std::string str() const;

private:
    PathCtxPtr ctx_;
    std::map<Mono, Scalar> terms_;
};

/// Slot of a bimodule term: eta_a (a in H), eta_i (i in I), or their duals.
struct Slot {
    enum class Kind { Arrow, Vertex, ArrowDual, VertexDual };
    Kind kind = Kind::Vertex;
    int index = 0;
    bool operator<(const Slot& o) const {
        return kind != o.kind ? kind < o.kind : index < o.index;
    }
    bool operator==(const Slot& o) const { return kind == o.kind && index == o.index; }
    /// Vertex the left factor must end at / the right factor must start at.
    int left_attach(const DoubledQuiver& qd) const;
    int right_attach(const DoubledQuiver& qd) const;
};

/// Formal sums p (x) slot (x) q over kQ^dbl[t]; tensors are over S[t], so
/// t-powers slide across the slot and are folded into the right factor.
/// Slot-incompatible terms vanish at construction.
class BimodElem {
public:
    BimodElem() = default;
    explicit BimodElem(PathCtxPtr ctx) : ctx_(std::move(ctx)) {}

    struct Term {
        Mono left;
        Slot slot;
        Mono right;
        bool operator<(const Term& o) const;
        bool operator==(const Term& o) const {
            return slot == o.slot && left == o.left && right == o.right;
        }
    };

    static BimodElem zero(PathCtxPtr ctx) { return BimodElem(std::move(ctx)); }
    static BimodElem pure_slot(PathCtxPtr ctx, const Slot& s);

    const PathCtxPtr& ctx() const { return ctx_; }
    const std::map<Term, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    BimodElem operator+(const BimodElem& o) const;
    BimodElem operator-(const BimodElem& o) const;
    BimodElem operator*(const Scalar& c) const;
    bool operator==(const BimodElem& o) const { return terms_ == o.terms_; }

    /// p * x and x * p for a path polynomial p.
    BimodElem lmul(const PathPoly& p) const;
    BimodElem rmul(const PathPoly& p) const;

    void add_term(Mono left, const Slot& s, Mono right, const Scalar& c);
    std::string str() const;

private:
    PathCtxPtr ctx_;
    std::map<Term, Scalar> terms_;
};

/// Universal S[t]-linear derivation: delta(a) = 1 (x) eta_a (x) 1,
/// delta(e_i) = delta(t) = 0, Leibniz on words.
BimodElem derive(const PathPoly& p);

/// The relation package: G_a = t^2 + a a*, the partial products L_a, R_a,
/// D = G_{a_1}...G_{a_g}, D* = q G_{a_g*}...G_{a_1*}, rho = D - D*.
struct RelationElements {
    PathCtxPtr ctx;
    std::vector<Scalar> q;       // per vertex
    std::vector<PathPoly> G;     // indexed by h in H
    std::vector<PathPoly> L;     // L_{a_j} and L_{a_j*}
    std::vector<PathPoly> R;     // R_{a_j} and R_{a_j*}
    PathPoly D;
    PathPoly Dstar;
    PathPoly rho;
};

RelationElements build_relation(PathCtxPtr ctx, const std::vector<Scalar>& q);

/// Components of the maps in P_0(-2g) -> P_1(-1) -> P_0.
struct Differentials {
    std::vector<BimodElem> alpha;      // alpha(eta_i), per vertex
    std::vector<BimodElem> beta;       // beta(eta_h) = h eta_{s(h)} - eta_{t(h)} h
    std::vector<BimodElem> alpha_dual; // alpha_vee(eta_h_dual), per h in H
};

Differentials differential_components(const RelationElements& rel);

/// Symbolic identity report: each named identity checked in canonical form.
struct IdentityReport {
    struct Entry {
        std::string name;
        bool pass = false;
        std::string detail;
    };
    std::vector<Entry> entries;
    bool all_pass() const;
};

/// Checks, in the free algebra: G_a a = a G_{a*} and a* G_a = G_{a*} a* for
/// all a; Peirce diagonality of rho; alpha(eta_i) = e_i delta(rho); and
/// deg rho = 2g.  `rho_override` substitutes a corrupted rho (negative
/// controls in tests).
IdentityReport identity_suite(PathCtxPtr ctx, const std::vector<Scalar>& q,
                              const PathPoly* rho_override = nullptr);

/// Parser for the CLI expression syntax: arrow names (a trailing '*' with no
/// space is the star partner), 't', 'e(v)', rational literals, + - * ^ and
/// parentheses.  Errors carry the offending position.
PathPoly parse_path_expr(PathCtxPtr ctx, const std::string& text);

} // namespace mqv
