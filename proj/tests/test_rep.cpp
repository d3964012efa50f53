#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mqv/rep.hpp"

using namespace mqv;

namespace {

const Field F = Field::rational();

DoubledQuiver loop_quiver() { return make_double(Quiver{{"v"}, {{"a", 0, 0}}}); }
DoubledQuiver two_loop_quiver() {
    return make_double(Quiver{{"v"}, {{"a", 0, 0}, {"b", 0, 0}}});
}
DoubledQuiver two_vertex_quiver() {
    return make_double(Quiver{{"1", "2"}, {{"a", 0, 1}}});
}

ExactMatrix mat2(long a, long b, long c, long d) {
    ExactMatrix m(F, 2, 2);
    m.at(0, 0) = Scalar::from_int(F, a);
    m.at(0, 1) = Scalar::from_int(F, b);
    m.at(1, 0) = Scalar::from_int(F, c);
    m.at(1, 1) = Scalar::from_int(F, d);
    return m;
}

// The bundled 2x2 example: X_a = [[0,1],[0,0]], X_{a*} = [[0,0],[-2,0]], q = -1.
Representation r1() {
    Representation R;
    R.qd = loop_quiver();
    R.alpha = DimVector{{2}};
    R.field = F;
    R.X = {mat2(0, 1, 0, 0), mat2(0, 0, -2, 0)};
    return R;
}

std::vector<Scalar> qv(std::initializer_list<long> vals) {
    std::vector<Scalar> out;
    for (long v : vals) out.push_back(Scalar::from_int(F, v));
    return out;
}

PathCtxPtr ctx_for(const DoubledQuiver& qd) {
    return std::make_shared<const PathCtx>(PathCtx{qd, F});
}

} // namespace

TEST_CASE("check_rep on the bundled 2x2 example") {
    Representation R = r1();
    CheckReport rep = check_rep(R, qv({-1}));
    CHECK(rep.obstruction_ok);
    CHECK(rep.pass);
    REQUIRE(rep.residuals.size() == 1);
    CHECK(rep.residuals[0].is_zero());
    // the g-blocks from the hand computation: diag entries +-1
    ExactMatrix ga = g_block(R, 0);
    ExactMatrix gas = g_block(R, 1);
    CHECK(ga * gas == ExactMatrix::identity(F, 2) * Scalar::from_int(F, -1));
}

TEST_CASE("check_rep scalar case") {
    Representation R;
    R.qd = loop_quiver();
    R.alpha = DimVector{{1}};
    R.field = F;
    ExactMatrix xa(F, 1, 1), xas(F, 1, 1);
    xa.at(0, 0) = Scalar::from_int(F, 2);
    xas.at(0, 0) = Scalar::from_int(F, 3);
    R.X = {xa, xas};
    CheckReport rep = check_rep(R, qv({1}));
    CHECK(rep.pass); // (1+6)(1+6)^{-1} = 1
}

TEST_CASE("check_rep detects singular g-blocks") {
    // x_a = 1, x_{a*} = -1: 1 + x_{a*} x_a = 0
    Representation R;
    R.qd = loop_quiver();
    R.alpha = DimVector{{1}};
    R.field = F;
    ExactMatrix xa(F, 1, 1), xas(F, 1, 1);
    xa.at(0, 0) = Scalar::from_int(F, 1);
    xas.at(0, 0) = Scalar::from_int(F, -1);
    R.X = {xa, xas};
    CHECK_THROWS_AS(check_rep(R, qv({1})), SingularG);
}

TEST_CASE("evaluate rejects wrong left idempotent support") {
    Representation R;
    R.qd = two_vertex_quiver();
    R.alpha = DimVector{{1, 1}};
    R.field = F;
    ExactMatrix xa(F, 1, 1), xas(F, 1, 1);
    xa.at(0, 0) = Scalar::from_int(F, 1);
    xas.at(0, 0) = Scalar::from_int(F, -2);
    R.X = {xa, xas};
    GradedModule M = induce(R, 2);
    auto ctx = ctx_for(R.qd);
    PathPoly a = PathPoly::arrow(ctx, 0); // starts at vertex 0
    CHECK_THROWS_AS(evaluate(a, M, 1, 0), VertexMismatch);
}

TEST_CASE("check_rep obstruction") {
    Representation R = r1();
    Field c3 = Field::cyclotomic(3);
    // promote matrices to Q(zeta_3)
    Representation Rc;
    Rc.qd = R.qd;
    Rc.alpha = R.alpha;
    Rc.field = c3;
    for (const auto& x : R.X) {
        ExactMatrix m(c3, x.rows(), x.cols());
        for (size_t r = 0; r < x.rows(); ++r)
            for (size_t col = 0; col < x.cols(); ++col)
                m.at(r, col) = Scalar::from_rat(c3, x.at(r, col).rat());
        Rc.X.push_back(m);
    }
    // q = zeta_3, alpha = 2: q^alpha = zeta_3^2 != 1
    CHECK_THROWS_AS(check_rep(Rc, {Scalar::cyclotomic_root(3, 1)}), ObstructionError);
}

TEST_CASE("sampler: one loop, alpha 2, q = -1") {
    DoubledQuiver qd = loop_quiver();
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 17ULL}) {
        SampleResult sr = sample_rep(qd, DimVector{{2}}, qv({-1}), F, seed);
        CHECK(sr.certificate.pass);
        for (const auto& m : sr.certificate.residuals) CHECK(m.is_zero());
    }
}

TEST_CASE("sampler: two-vertex, alpha (1,1), q = (-1,-1)") {
    DoubledQuiver qd = two_vertex_quiver();
    SampleResult sr = sample_rep(qd, DimVector{{1, 1}}, qv({-1, -1}), F, 5);
    CHECK(sr.certificate.pass);
    // scalar solve: 1 + x y = -1
    Scalar x = sr.rep.X[0].at(0, 0), y = sr.rep.X[1].at(0, 0);
    CHECK(Scalar::one(F) + x * y == Scalar::from_int(F, -1));
}

TEST_CASE("sampler shape and obstruction guards") {
    DoubledQuiver qd = two_vertex_quiver();
    CHECK_THROWS_AS(sample_rep(qd, DimVector{{1, 2}}, qv({1, 1}), F, 1), UnsupportedShape);
    CHECK_THROWS_AS(sample_rep(qd, DimVector{{1, 1}}, qv({2, 1}), F, 1), ObstructionError);
}

TEST_CASE("sampler: two loops and cyclotomic parameters") {
    DoubledQuiver qd = two_loop_quiver();
    SampleResult sr = sample_rep(qd, DimVector{{2}}, qv({1}), F, 11);
    CHECK(sr.certificate.pass);

    Field c3 = Field::cyclotomic(3);
    // q = zeta_3, alpha = 3: q^alpha = zeta_3^3 = 1
    SampleResult sc = sample_rep(qd, DimVector{{3}}, {Scalar::cyclotomic_root(3, 1)}, c3, 7);
    CHECK(sc.certificate.pass);
}

TEST_CASE("induce defaults and truncate agree on sampled reps") {
    DoubledQuiver qd = two_loop_quiver();
    for (std::uint64_t seed : {2ULL, 8ULL}) {
        SampleResult sr = sample_rep(qd, DimVector{{2}}, qv({1}), F, seed);
        GradedModule A = induce(sr.rep, 4);
        GradedModule B = truncate(sr.rep, 4);
        CHECK(A.dims == B.dims);
        for (int h = 0; h < 4; ++h)
            for (int n = 0; n < 4; ++n) CHECK(A.Xh[h][n] == B.Xh[h][n]);
    }
}

TEST_CASE("induce defaults and truncate agree") {
    Representation R = r1();
    GradedModule A = induce(R, 2);
    GradedModule B = truncate(R, 2);
    CHECK(A.dims == B.dims);
    for (int h = 0; h < 2; ++h)
        for (int n = 0; n < 2; ++n) CHECK(A.Xh[h][n] == B.Xh[h][n]);
    for (int n = 0; n < 2; ++n) CHECK(A.Tt[0][n] == B.Tt[0][n]);
    // all t maps identity, (a,n) = X_a
    CHECK(A.Tt[0][0] == ExactMatrix::identity(F, 2));
    CHECK(A.Xh[0][1] == R.X[0]);
    // A-module flag
    auto ctx = ctx_for(R.qd);
    RelationElements rel = build_relation(ctx, qv({-1}));
    std::string why;
    CHECK(A.is_A_module(rel, &why));
}

TEST_CASE("induce with random group elements is isomorphic to the default") {
    Representation R = r1();
    std::vector<ExactMatrix> g;
    // invertible 2x2 twists per (i,n)
    g.push_back(mat2(1, 1, 0, 1));
    g.push_back(mat2(2, 0, 1, 1));
    g.push_back(mat2(1, 0, 3, 1));
    GradedModule twisted = induce(R, 2, &g);
    auto ctx = ctx_for(R.qd);
    RelationElements rel = build_relation(ctx, qv({-1}));
    CHECK(twisted.is_A_module(rel));
    GradedModule plain = induce(R, 2);
    CHECK(graded_hom(twisted, plain).dim >= 1);

    std::vector<ExactMatrix> sing = {mat2(1, 1, 0, 1), mat2(0, 0, 0, 0), mat2(1, 0, 0, 1)};
    CHECK_THROWS_AS(induce(R, 2, &sing), SingularGroupElem);
}

TEST_CASE("induce on the zero representation") {
    Representation R;
    R.qd = loop_quiver();
    R.alpha = DimVector{{0}};
    R.field = F;
    R.X = {ExactMatrix(F, 0, 0), ExactMatrix(F, 0, 0)};
    GradedModule M = induce(R, 2);
    CHECK(M.dim_at(0, 0) == 0);
    GradedModule T = truncate(R, 2);
    CHECK(T.dims == M.dims);
}

TEST_CASE("evaluate") {
    Representation R = r1();
    GradedModule M = induce(R, 2);
    auto ctx = ctx_for(R.qd);

    // e_v acts as the identity on the (v,n) fiber
    PathPoly ev = PathPoly::idempotent(ctx, 0);
    CHECK(evaluate(ev, M, 0, 1) == ExactMatrix::identity(F, 2));

    // G_a = Id + X_{a*} X_a on the s(a) fiber (t maps identity)
    RelationElements rel = build_relation(ctx, qv({-1}));
    ExactMatrix g = evaluate(rel.G[0], M, 0, 0);
    CHECK(g == ExactMatrix::identity(F, 2) + R.X[1] * R.X[0]);

    // rho evaluates to zero in every admissible degree
    CHECK(evaluate(rel.rho, M, 0, 0).is_zero());

    CHECK_THROWS_AS(evaluate(rel.rho, M, 0, 1), DegreeOverflow);
    PathPoly a = PathPoly::arrow(ctx, 0);
    CHECK_THROWS_AS(evaluate(ev + a * PathPoly::t(ctx), M, 0, 0), ShapeMismatch);
}

TEST_CASE("evaluate is multiplicative with order reversal") {
    Representation R = r1();
    GradedModule M = induce(R, 2);
    auto ctx = ctx_for(R.qd);
    std::mt19937_64 rng(19);
    std::vector<PathPoly> gens = {PathPoly::arrow(ctx, 0), PathPoly::arrow(ctx, 1),
                                  PathPoly::t(ctx)};
    for (int trial = 0; trial < 20; ++trial) {
        PathPoly p = gens[rng() % gens.size()];
        PathPoly q = gens[rng() % gens.size()];
        // evaluate(pq) from level 0 = evaluate(q at level 1) . evaluate(p at level 0)
        ExactMatrix lhs = evaluate(p * q, M, 0, 0);
        ExactMatrix rhs = evaluate(q, M, 0, 1) * evaluate(p, M, 0, 0);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("evaluated G_a is invertible on induced modules in all degrees") {
    DoubledQuiver qd = two_loop_quiver();
    SampleResult sr = sample_rep(qd, DimVector{{2}}, qv({1}), F, 3);
    GradedModule M = induce(sr.rep, 4);
    auto ctx = ctx_for(qd);
    RelationElements rel = build_relation(ctx, qv({1}));
    for (int h = 0; h < 4; ++h)
        for (int n = 0; n + 2 <= 4; ++n) {
            ExactMatrix g = evaluate(rel.G[h], M, 0, n);
            CHECK_NOTHROW((void)g.inverse());
        }
}

TEST_CASE("graded_hom") {
    Representation R = r1();
    GradedModule M = induce(R, 2);
    CHECK(graded_hom(M, M).dim == 1); // R1 is simple

    // zero module
    Representation Z;
    Z.qd = R.qd;
    Z.alpha = DimVector{{0}};
    Z.field = F;
    Z.X = {ExactMatrix(F, 0, 0), ExactMatrix(F, 0, 0)};
    GradedModule ZM = induce(Z, 2);
    CHECK(graded_hom(ZM, ZM).dim == 0);

    // two non-isomorphic stable samples: hom = 0 both ways
    DoubledQuiver qd = loop_quiver();
    SampleResult s1 = sample_rep(qd, DimVector{{2}}, qv({-1}), F, 101);
    SampleResult s2 = sample_rep(qd, DimVector{{2}}, qv({-1}), F, 202);
    if (rep_hom_dim(s1.rep, s2.rep) == 0) {
        GradedModule M1 = induce(s1.rep, 2);
        GradedModule M2 = induce(s2.rep, 2);
        CHECK(graded_hom(M1, M2).dim == 0);
        CHECK(graded_hom(M2, M1).dim == 0);
    }
}

TEST_CASE("tangent dimensions") {
    // R1: tangent 5, moduli 2 (= 2 p(alpha), p(alpha) = 1 + g n^2 - n^2)
    TangentReport tr = tangent_dim(r1(), qv({-1}));
    CHECK(tr.tangent_dim == 5);
    CHECK(tr.moduli_dim == 2);

    // scalar case g=1, alpha=1, q=1: moduli 2
    Representation S;
    S.qd = loop_quiver();
    S.alpha = DimVector{{1}};
    S.field = F;
    ExactMatrix xa(F, 1, 1), xas(F, 1, 1);
    xa.at(0, 0) = Scalar::from_int(F, 2);
    xas.at(0, 0) = Scalar::from_int(F, 3);
    S.X = {xa, xas};
    CHECK(tangent_dim(S, qv({1})).moduli_dim == 2);

    // two-vertex, alpha (1,1): moduli 0
    SampleResult sr = sample_rep(two_vertex_quiver(), DimVector{{1, 1}}, qv({-1, -1}), F, 5);
    CHECK(tangent_dim(sr.rep, qv({-1, -1})).moduli_dim == 0);
}

TEST_CASE("moduli dimension equals expected_rank + 2 at sampled points") {
    struct Case {
        DoubledQuiver qd;
        DimVector alpha;
        std::vector<Scalar> q;
    };
    std::vector<Case> cases = {
        {loop_quiver(), DimVector{{2}}, qv({-1})},
        {two_loop_quiver(), DimVector{{2}}, qv({1})},
        {two_vertex_quiver(), DimVector{{1, 1}}, qv({-1, -1})},
    };
    for (const auto& c : cases) {
        SampleResult sr = sample_rep(c.qd, c.alpha, c.q, F, 23);
        TangentReport tr = tangent_dim(sr.rep, c.q);
        CHECK(tr.moduli_dim == expected_rank(c.qd, c.alpha) + 2);
    }
}

TEST_CASE("direct sums") {
    Representation R = r1();
    Representation RR = R.direct_sum(R);
    CHECK(RR.alpha.dims == std::vector<int>{4});
    CheckReport rep = check_rep(RR, qv({-1}));
    CHECK(rep.pass);
    CHECK(rep_hom_dim(RR, RR) >= 2);
}
