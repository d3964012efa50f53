#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mqv/ncpath.hpp"

namespace mqv {

/// Representation of kQ^dbl: one matrix per arrow of the double, of shape
/// alpha_{t(h)} x alpha_{s(h)}, i.e. a map V_{s(h)} -> V_{t(h)} in the
/// column-vector convention.  Words act along the path, so the evaluation of
/// a product reverses matrix order: v.(xy) = (v.x).y.
struct Representation {
    DoubledQuiver qd;
    DimVector alpha;
    Field field = Field::rational();
    std::vector<ExactMatrix> X; // indexed by h in H

    void validate() const;
    /// Direct sum with another representation on the same quiver.
    Representation direct_sum(const Representation& other) const;
};

/// Graded module over the tripled quiver: fibers (i,n), arrow matrices for
/// every (h,n), and level-shift matrices t_{i,n}.
struct GradedModule {
    TripledQuiver tq;
    Field field = Field::rational();
    std::vector<int> dims;                    // (i,n) at i*(N+1)+n
    std::vector<std::vector<ExactMatrix>> Xh; // [h][n]: fiber(s(h),n) -> fiber(t(h),n+1)
    std::vector<std::vector<ExactMatrix>> Tt; // [i][n]: fiber(i,n) -> fiber(i,n+1)

    int dim_at(int i, int n) const { return dims[i * (tq.N + 1) + n]; }
    int index_of(int i, int n) const { return i * (tq.N + 1) + n; }

    /// Checks the J-relations t_{(s(h),n)} (h,n+1) = (h,n) t_{(t(h),n+1)} and
    /// the vanishing of evaluated rho in all admissible degrees.
    bool is_A_module(const RelationElements& rel, std::string* why = nullptr) const;
};

/// evaluate(p, M, i, n): matrix of the action of a homogeneous p with left
/// idempotent support i, from the (i,n) fiber into the full level n+deg(p)
/// (blocks stacked in vertex order).  Arrows consume one level each; the
/// canonical trailing t-power acts last.
ExactMatrix evaluate(const PathPoly& p, const GradedModule& M, int i, int n);

/// Block of evaluate() landing at vertex j (other blocks must vanish for
/// diagonal elements).
ExactMatrix evaluate_block(const PathPoly& p, const GradedModule& M, int i, int n, int j);

/// Collapsed evaluation on a plain representation: t acts as the identity,
/// arrows act by X_h along the path.  p needs left support i; returns the
/// block landing at vertex j.
ExactMatrix rep_evaluate(const PathPoly& p, const Representation& R, int i, int j);

/// Exact residual report for the multiplicative relation
/// g_{a_1}...g_{a_g} g_{a_1*}^{-1}...g_{a_g*}^{-1} = q.
struct CheckReport {
    bool obstruction_ok = false; // q^alpha == 1
    Scalar q_alpha;              // the computed q^alpha
    std::vector<ExactMatrix> residuals; // per vertex; empty until g blocks invert
    bool pass = false;           // all residuals exactly zero
};

/// Verifies q^alpha = 1, then invertibility of every block 1 + X_{a*} X_a,
/// then the per-vertex relation residuals.  Throws ObstructionError or
/// SingularG; returns exact residuals.
CheckReport check_rep(const Representation& R, const std::vector<Scalar>& q);

struct SamplerConfig {
    int box = 3;        // entries drawn uniformly from [-box, box]
    int retries = 64;
};

struct SampleResult {
    Representation rep;
    CheckReport certificate;
    int attempts = 0;
};

/// Samples X_h for h != a_g* from the integer box and solves the relation at
/// vertex t(a_g) for X_{a_g*}: a direct solve when a_g is not a loop, an
/// exact Sylvester-type linear solve when it is.  The result is verified at
/// every vertex; failures raise ConsistencyError.
SampleResult sample_rep(const DoubledQuiver& qd, const DimVector& alpha,
                        const std::vector<Scalar>& q, const Field& field,
                        std::uint64_t seed, const SamplerConfig& cfg = {});

/// Induction to a graded A_{[0,N]}-module: (h,n) = g_{t(h),n+1} X_h g_{s(h),n}^{-1},
/// t_{i,n} = g_{i,n+1} g_{i,n}^{-1}.  Defaults (all identity) give constant
/// arrow matrices and identity t-maps.
GradedModule induce(const Representation& R, int N,
                    const std::vector<ExactMatrix>* group_elems = nullptr);

/// Truncation tau_{[0,N]} of V[t], built from the V[t] description directly.
GradedModule truncate(const Representation& R, int N);

/// Basis of degree-0 graded homomorphisms W -> V commuting with every arrow
/// and t-map, as the kernel of one assembled exact linear system.
struct GradedHom {
    size_t dim = 0;
    // Each element: per-(i,n) blocks, stored flat alongside the fiber dims.
    std::vector<std::vector<ExactMatrix>> basis; // [k][vertexLevel]
};

GradedHom graded_hom(const GradedModule& W, const GradedModule& V);

/// Rep-level Hom space dimension (tuples commuting with every X_h), used as
/// an isomorphy oracle that is independent of the Ext complex.
size_t rep_hom_dim(const Representation& A, const Representation& B);

/// Dimension of the kernel of the eps-linearized relation map at R, plus the
/// derived moduli dimension tangent_dim - (sum alpha_i^2 - 1).
struct TangentReport {
    long tangent_dim = 0;
    long moduli_dim = 0;
};

TangentReport tangent_dim(const Representation& R, const std::vector<Scalar>& q);

/// Per-vertex blocks of evaluated g_a = 1 + a a* at s(a) (identity elsewhere).
ExactMatrix g_block(const Representation& R, int h);

} // namespace mqv
