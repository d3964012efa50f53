#include "mqv/rep.hpp"

#include <sstream>

namespace mqv {

void Representation::validate() const {
    if (static_cast<int>(alpha.dims.size()) != qd.num_vertices())
        throw IndexMismatch("alpha length != vertex count");
    alpha.validate();
    if (static_cast<int>(X.size()) != qd.num_arrows())
        throw ShapeMismatch("one matrix per arrow of the double required");
    for (int h = 0; h < qd.num_arrows(); ++h) {
        if (static_cast<int>(X[h].rows()) != alpha.dims[qd.tgt(h)] ||
            static_cast<int>(X[h].cols()) != alpha.dims[qd.src(h)])
            throw ShapeMismatch("matrix for arrow " + qd.arrow_name(h) + " has wrong shape");
        if (X[h].field() != field) throw FieldMismatch("mixed fields in representation");
    }
}

Representation Representation::direct_sum(const Representation& other) const {
    Representation r;
    r.qd = qd;
    r.field = field;
    r.alpha.dims.resize(alpha.dims.size());
    for (size_t i = 0; i < alpha.dims.size(); ++i)
        r.alpha.dims[i] = alpha.dims[i] + other.alpha.dims[i];
    for (int h = 0; h < qd.num_arrows(); ++h) {
        ExactMatrix m(field, r.alpha.dims[qd.tgt(h)], r.alpha.dims[qd.src(h)]);
        for (size_t a = 0; a < X[h].rows(); ++a)
            for (size_t b = 0; b < X[h].cols(); ++b) m.at(a, b) = X[h].at(a, b);
        for (size_t a = 0; a < other.X[h].rows(); ++a)
            for (size_t b = 0; b < other.X[h].cols(); ++b)
                m.at(X[h].rows() + a, X[h].cols() + b) = other.X[h].at(a, b);
        r.X.push_back(std::move(m));
    }
    return r;
}

// ---------------------------------------------------------------------------

ExactMatrix evaluate(const PathPoly& p, const GradedModule& M, int i, int n) {
    const auto& qd = M.tq.dbl;
    auto deg = p.homogeneous_degree();
    if (!deg) throw ShapeMismatch("evaluate requires a homogeneous element");
    for (const auto& [m, c] : p.terms())
        if (m.start(qd) != i)
            throw VertexMismatch("term does not have left idempotent support at vertex " +
                                 qd.base.vertices[i]);
    if (n < 0 || n > M.tq.N || n + *deg > M.tq.N)
        throw DegreeOverflow("degree " + std::to_string(n + *deg) + " exceeds N = " +
                             std::to_string(M.tq.N));

    const int out_level = n + *deg;
    int out_rows = 0;
    std::vector<int> offset(qd.num_vertices(), 0);
    for (int j = 0; j < qd.num_vertices(); ++j) {
        offset[j] = out_rows;
        out_rows += M.dim_at(j, out_level);
    }
    ExactMatrix result(M.field, out_rows, M.dim_at(i, n));

    for (const auto& [mono, coeff] : p.terms()) {
        ExactMatrix acc = ExactMatrix::identity(M.field, M.dim_at(i, n));
        int level = n;
        int vertex = i;
        for (int h : mono.arrows) {
            acc = M.Xh[h][level] * acc;
            vertex = qd.tgt(h);
            ++level;
        }
        for (int k = 0; k < mono.tpow; ++k) {
            acc = M.Tt[vertex][level] * acc;
            ++level;
        }
        for (size_t r = 0; r < acc.rows(); ++r)
            for (size_t c = 0; c < acc.cols(); ++c)
                result.at(offset[vertex] + r, c) =
                    result.at(offset[vertex] + r, c) + coeff * acc.at(r, c);
    }
    return result;
}

ExactMatrix evaluate_block(const PathPoly& p, const GradedModule& M, int i, int n, int j) {
    auto deg = p.homogeneous_degree();
    if (!deg) throw ShapeMismatch("evaluate requires a homogeneous element");
    ExactMatrix full = evaluate(p, M, i, n);
    int off = 0;
    for (int v = 0; v < j; ++v) off += M.dim_at(v, n + *deg);
    return full.block(off, 0, M.dim_at(j, n + *deg), M.dim_at(i, n));
}

ExactMatrix rep_evaluate(const PathPoly& p, const Representation& R, int i, int j) {
    const auto& qd = R.qd;
    ExactMatrix result(R.field, R.alpha.dims[j], R.alpha.dims[i]);
    for (const auto& [mono, coeff] : p.terms()) {
        if (mono.start(qd) != i) continue;
        if (mono.end(qd) != j) continue;
        ExactMatrix acc = ExactMatrix::identity(R.field, R.alpha.dims[i]);
        for (int h : mono.arrows) acc = R.X[h] * acc; // t acts as the identity
        result = result + acc * coeff;
    }
    return result;
}

ExactMatrix g_block(const Representation& R, int h) {
    const int v = R.qd.src(h);
    return ExactMatrix::identity(R.field, R.alpha.dims[v]) + R.X[R.qd.star(h)] * R.X[h];
}

namespace {

// Per-vertex block at vertex i of the evaluated g_h (identity off s(h)).
ExactMatrix g_block_at(const Representation& R, int h, int i) {
    if (R.qd.src(h) == i) return g_block(R, h);
    return ExactMatrix::identity(R.field, R.alpha.dims[i]);
}

Scalar q_to_alpha(const std::vector<Scalar>& q, const DimVector& alpha) {
    Scalar acc = Scalar::one(q[0].field());
    for (size_t i = 0; i < q.size(); ++i) acc = acc * q[i].pow(alpha.dims[i]);
    return acc;
}

} // namespace

CheckReport check_rep(const Representation& R, const std::vector<Scalar>& q) {
    R.validate();
    const auto& qd = R.qd;
    const int g = qd.g();
    CheckReport rep;
    rep.q_alpha = q_to_alpha(q, R.alpha);
    rep.obstruction_ok = rep.q_alpha == Scalar::one(rep.q_alpha.field());
    if (!rep.obstruction_ok)
        throw ObstructionError("q^alpha = " + rep.q_alpha.str() +
                               " != 1: no representation with this dimension vector exists");

    std::vector<ExactMatrix> g_inv(2 * g);
    for (int h = 0; h < 2 * g; ++h) {
        ExactMatrix blk = g_block(R, h);
        try {
            g_inv[h] = blk.inverse();
        } catch (const SingularOperator&) {
            throw SingularG("block 1 + X_{" + qd.arrow_name(qd.star(h)) + "} X_{" +
                            qd.arrow_name(h) + "} is singular");
        }
    }

    rep.pass = true;
    for (int i = 0; i < qd.num_vertices(); ++i) {
        const int d = R.alpha.dims[i];
        ExactMatrix m = ExactMatrix::identity(R.field, d);
        for (int j = 0; j < g; ++j) m = g_block_at(R, j, i) * m;
        for (int j = 0; j < g; ++j) {
            if (qd.src(g + j) == i) m = g_inv[g + j] * m;
        }
        m = m - ExactMatrix::identity(R.field, d) * q[i];
        if (!m.is_zero()) rep.pass = false;
        rep.residuals.push_back(std::move(m));
    }
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

ExactMatrix random_matrix(const Field& f, int rows, int cols, std::mt19937_64& rng, int box) {
    std::uniform_int_distribution<int> dist(-box, box);
    ExactMatrix m(f, rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m.at(r, c) = Scalar::from_int(f, dist(rng));
    return m;
}

ExactMatrix random_invertible(const Field& f, int n, std::mt19937_64& rng, int box,
                              int tries = 32) {
    for (int k = 0; k < tries; ++k) {
        ExactMatrix m = random_matrix(f, n, n, rng, box);
        if (rank_of(m) == static_cast<size_t>(n)) return m;
    }
    throw RetryExhausted("no invertible draw");
}

// Random invertible polynomial in g (an element of its commutant).
ExactMatrix random_commuting(const Field& f, const ExactMatrix& g, std::mt19937_64& rng,
                             int box, int tries = 32) {
    const int n = static_cast<int>(g.rows());
    std::uniform_int_distribution<int> dist(-box, box);
    for (int k = 0; k < tries; ++k) {
        ExactMatrix acc = ExactMatrix::zero(f, n, n);
        ExactMatrix pow = ExactMatrix::identity(f, n);
        for (int d = 0; d < n; ++d) {
            acc = acc + pow * Scalar::from_int(f, dist(rng));
            pow = pow * g;
        }
        if (rank_of(acc) == static_cast<size_t>(n)) return acc;
    }
    throw RetryExhausted("no invertible commuting draw");
}

// One-vertex sampler.  Solving for the last starred matrix after free draws
// has generically empty fibers once g >= 2 (the unique solution of the
// linearized relation is the singular point Id + XY = 0), so the point is
// built directly instead: choose gamma with q-invariant spectrum, set
//   gamma_j = C_j gamma C_j^{-1},  delta_j = gamma_{g+1-j} (j < g),
//   delta_g = q^{-1} gamma_1,
// so the relation telescopes, then realize each pair as
//   gamma_j = 1 + X_{j*} X_j,  delta_j = X_j gamma_j X_j^{-1}.
Representation sample_one_vertex(const DoubledQuiver& qd, int n, const Scalar& q,
                                 const Field& field, std::mt19937_64& rng,
                                 const SamplerConfig& cfg) {
    const int g = qd.g();
    // multiplicative order of q (divides n because q^n = 1)
    int ord = 1;
    {
        Scalar acc = q;
        while (!(acc == Scalar::one(field))) {
            acc = acc * q;
            ++ord;
            if (ord > n) throw ObstructionError("q^alpha != 1");
        }
    }

    std::uniform_int_distribution<int> nz(1, std::max(1, cfg.box));
    std::uniform_int_distribution<int> sign(0, 1);

    // D0: blocks lambda_k (1, q, ..., q^{ord-1}); P: block cyclic shift with
    // P D0 P^{-1} = q^{-1} D0.
    ExactMatrix D0(field, n, n);
    ExactMatrix P = ExactMatrix::zero(field, n, n);
    for (int k = 0; k < n / ord; ++k) {
        Scalar lambda = Scalar::from_int(field, sign(rng) ? nz(rng) : -nz(rng));
        for (int i = 0; i < ord; ++i) {
            D0.at(k * ord + i, k * ord + i) = lambda * q.pow(i);
            P.at(k * ord + (i + 1) % ord, k * ord + i) = Scalar::one(field);
        }
    }

    ExactMatrix Z = random_invertible(field, n, rng, cfg.box);
    ExactMatrix Zi = Z.inverse();
    ExactMatrix gamma = Z * D0 * Zi;
    ExactMatrix W = Z * P * Zi; // W gamma W^{-1} = q^{-1} gamma

    std::vector<ExactMatrix> C{ExactMatrix::identity(field, n)};
    for (int j = 1; j < g; ++j) C.push_back(random_invertible(field, n, rng, cfg.box));

    Representation R;
    R.qd = qd;
    R.alpha = DimVector{std::vector<int>{n}};
    R.field = field;
    R.X.resize(2 * g);
    const ExactMatrix id = ExactMatrix::identity(field, n);
    for (int j = 0; j < g; ++j) {
        ExactMatrix mix = random_commuting(field, gamma, rng, cfg.box);
        ExactMatrix Xj;
        if (j + 1 < g) {
            // delta_j = gamma_{g-j} (1-based g+1-j), witness C_{g-1-j} p C_j^{-1}
            Xj = C[g - 1 - j] * mix * C[j].inverse();
        } else {
            // delta_g = q^{-1} gamma_1, witness W p C_g^{-1}
            Xj = W * mix * C[j].inverse();
        }
        ExactMatrix gamma_j = C[j] * gamma * C[j].inverse();
        R.X[j] = Xj;
        R.X[g + j] = (gamma_j - id) * Xj.inverse();
    }
    return R;
}

} // namespace

SampleResult sample_rep(const DoubledQuiver& qd, const DimVector& alpha,
                        const std::vector<Scalar>& q, const Field& field,
                        std::uint64_t seed, const SamplerConfig& cfg) {
    if (qd.g() == 0) throw UnsupportedShape("sampler needs at least one arrow");
    const int g = qd.g();
    const int last = g - 1;          // a_g
    const int unknown = 2 * g - 1;   // a_g*
    const int w = qd.tgt(last);      // solve vertex t(a_g)
    const int n = alpha.dims[w];
    if (alpha.dims[qd.src(last)] != n || n == 0)
        throw UnsupportedShape("last ordered arrow must be square with positive dimension");
    {
        Scalar qa = q_to_alpha(q, alpha);
        if (!(qa == Scalar::one(qa.field())))
            throw ObstructionError("q^alpha = " + qa.str() + " != 1, refusing to sample");
    }

    std::mt19937_64 rng(seed);

    if (qd.num_vertices() == 1) {
        for (int attempt = 1; attempt <= cfg.retries; ++attempt) {
            try {
                Representation R = sample_one_vertex(qd, n, q[0], field, rng, cfg);
                CheckReport cert = check_rep(R, q);
                if (!cert.pass) continue;
                SampleResult out;
                out.rep = std::move(R);
                out.certificate = std::move(cert);
                out.attempts = attempt;
                return out;
            } catch (const RetryExhausted&) {
                continue;
            } catch (const SingularOperator&) {
                continue;
            } catch (const SingularG&) {
                continue;
            }
        }
        throw RetryExhausted("no admissible sample in " + std::to_string(cfg.retries) +
                             " tries");
    }

    const bool loop = qd.src(last) == w;
    std::string last_failure = "RetryExhausted";

    for (int attempt = 1; attempt <= cfg.retries; ++attempt) {
        Representation R;
        R.qd = qd;
        R.alpha = alpha;
        R.field = field;
        R.X.resize(2 * g);
        for (int h = 0; h < 2 * g; ++h) {
            if (h == unknown) {
                R.X[h] = ExactMatrix::zero(field, alpha.dims[qd.tgt(h)], alpha.dims[qd.src(h)]);
                continue;
            }
            R.X[h] = random_matrix(field, alpha.dims[qd.tgt(h)], alpha.dims[qd.src(h)], rng,
                                   cfg.box);
        }

        try {
            // Required inverses among the known blocks at vertex w.
            ExactMatrix C1 = ExactMatrix::identity(field, n); // product of starred inverses
            for (int j = 0; j < g - 1; ++j)
                if (qd.src(g + j) == w) C1 = g_block(R, g + j).inverse() * C1;
            ExactMatrix C2 = ExactMatrix::identity(field, n); // product of unstarred blocks
            for (int j = 0; j < g - 1 + (loop ? 0 : 1); ++j)
                C2 = g_block_at(R, j, w) * C2;

            const Scalar qw = q[w];
            ExactMatrix Y(field, n, n);
            if (!loop) {
                // C1 C2 = q_w (Id + X_g Y)  =>  Y = X_g^{-1} (q_w^{-1} C1 C2 - Id)
                ExactMatrix M = (C1 * C2) * qw.inverse();
                Y = R.X[last].inverse() * (M - ExactMatrix::identity(field, n));
            } else {
                // C1 (Id + Y X_g) C2 = q_w (Id + X_g Y):
                // linear in Y; assemble columns over the E_{kl} basis.
                ExactMatrix XC2 = R.X[last] * C2;
                ExactMatrix rhs_mat =
                    ExactMatrix::identity(field, n) * qw - C1 * C2;
                ExactMatrix sys(field, n * n, n * n);
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        ExactMatrix E(field, n, n);
                        E.at(k, l) = Scalar::one(field);
                        ExactMatrix img = C1 * E * XC2 - (R.X[last] * E) * qw;
                        const int col = k * n + l;
                        for (int r = 0; r < n; ++r)
                            for (int s = 0; s < n; ++s)
                                sys.at(r * n + s, col) = img.at(r, s);
                    }
                ExactMatrix rhs(field, n * n, 1);
                for (int r = 0; r < n; ++r)
                    for (int s = 0; s < n; ++s) rhs.at(r * n + s, 0) = rhs_mat.at(r, s);
                std::vector<Scalar> free_vals;
                std::uniform_int_distribution<int> dist(-cfg.box, cfg.box);
                for (int kk = 0; kk < n * n; ++kk)
                    free_vals.push_back(Scalar::from_int(field, dist(rng)));
                ExactMatrix yvec;
                if (!solve_linear(sys, rhs, yvec, &free_vals)) {
                    last_failure = "inconsistent";
                    continue;
                }
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) Y.at(k, l) = yvec.at(k * n + l, 0);
            }
            R.X[unknown] = Y;

            CheckReport cert = check_rep(R, q);
            if (!cert.pass) {
                last_failure = "ConsistencyError";
                continue;
            }
            SampleResult out;
            out.rep = std::move(R);
            out.certificate = std::move(cert);
            out.attempts = attempt;
            return out;
        } catch (const SingularOperator&) {
            last_failure = "singular";
            continue;
        } catch (const SingularG&) {
            last_failure = "singular";
            continue;
        }
    }
    if (last_failure == "ConsistencyError")
        throw ConsistencyError("solved representation fails the relation at another vertex");
    throw RetryExhausted("no admissible sample in " + std::to_string(cfg.retries) + " tries");
}

// ---------------------------------------------------------------------------

GradedModule induce(const Representation& R, int N,
                    const std::vector<ExactMatrix>* group_elems) {
    R.validate();
    TripledQuiver tq = make_triple(R.qd, N);
    const auto& qd = R.qd;
    const int nv = qd.num_vertices();

    auto g_at = [&](int i, int n) -> ExactMatrix {
        if (!group_elems) return ExactMatrix::identity(R.field, R.alpha.dims[i]);
        const ExactMatrix& m = (*group_elems)[i * (N + 1) + n];
        if (static_cast<int>(m.rows()) != R.alpha.dims[i] || m.rows() != m.cols())
            throw ShapeMismatch("group element at (" + std::to_string(i) + "," +
                                std::to_string(n) + ") has wrong shape");
        return m;
    };

    GradedModule M;
    M.tq = tq;
    M.field = R.field;
    M.dims.resize(nv * (N + 1));
    for (int i = 0; i < nv; ++i)
        for (int n = 0; n <= N; ++n) M.dims[i * (N + 1) + n] = R.alpha.dims[i];

    std::vector<std::vector<ExactMatrix>> ginv(nv);
    for (int i = 0; i < nv; ++i)
        for (int n = 0; n <= N; ++n) {
            try {
                ginv[i].push_back(g_at(i, n).inverse());
            } catch (const SingularOperator&) {
                throw SingularGroupElem("group element at (" + std::to_string(i) + "," +
                                        std::to_string(n) + ") is singular");
            }
        }

    M.Xh.resize(qd.num_arrows());
    for (int h = 0; h < qd.num_arrows(); ++h)
        for (int n = 0; n < N; ++n)
            M.Xh[h].push_back(g_at(qd.tgt(h), n + 1) * R.X[h] * ginv[qd.src(h)][n]);
    M.Tt.resize(nv);
    for (int i = 0; i < nv; ++i)
        for (int n = 0; n < N; ++n) M.Tt[i].push_back(g_at(i, n + 1) * ginv[i][n]);
    return M;
}

GradedModule truncate(const Representation& R, int N) {
    R.validate();
    TripledQuiver tq = make_triple(R.qd, N);
    GradedModule M;
    M.tq = tq;
    M.field = R.field;
    const int nv = R.qd.num_vertices();
    M.dims.resize(nv * (N + 1));
    for (int i = 0; i < nv; ++i)
        for (int n = 0; n <= N; ++n) M.dims[i * (N + 1) + n] = R.alpha.dims[i];
    // V[t]/V[t]_{>= N+1}: each arrow acts by X_h followed by the grading
    // shift, and t by the identity shift.
    M.Xh.resize(R.qd.num_arrows());
    for (int h = 0; h < R.qd.num_arrows(); ++h)
        M.Xh[h].assign(N, R.X[h]);
    M.Tt.resize(nv);
    for (int i = 0; i < nv; ++i)
        M.Tt[i].assign(N, ExactMatrix::identity(R.field, R.alpha.dims[i]));
    return M;
}

bool GradedModule::is_A_module(const RelationElements& rel, std::string* why) const {
    const auto& qd = tq.dbl;
    // J-relations: t_{(s(h),n)} (h,n+1) = (h,n) t_{(t(h),n+1)}
    for (int h = 0; h < qd.num_arrows(); ++h)
        for (int n = 0; n + 2 <= tq.N; ++n) {
            ExactMatrix lhs = Xh[h][n + 1] * Tt[qd.src(h)][n];
            ExactMatrix rhs = Tt[qd.tgt(h)][n + 1] * Xh[h][n];
            if (!(lhs == rhs)) {
                if (why)
                    *why = "J-relation fails for (" + qd.arrow_name(h) + "," +
                           std::to_string(n) + ")";
                return false;
            }
        }
    // evaluated rho vanishes in all admissible degrees
    const int g = qd.g();
    for (int i = 0; i < qd.num_vertices(); ++i) {
        PathPoly rho_i = rel.rho.left_idem(i);
        for (int n = 0; n + 2 * g <= tq.N; ++n) {
            if (dim_at(i, n) == 0) continue;
            if (!evaluate(rho_i, *this, i, n).is_zero()) {
                if (why)
                    *why = "rho does not vanish at vertex " + qd.base.vertices[i] +
                           ", degree " + std::to_string(n);
                return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------

namespace {

struct HomSystem {
    ExactMatrix mat;      // equations x unknowns
    std::vector<int> var_offset;
    int num_vars = 0;
};

// Unknowns: blocks Phi_{i,n}: W_{i,n} -> V_{i,n}, row-major within a block.
HomSystem assemble_graded_hom(const GradedModule& W, const GradedModule& V) {
    if (W.tq.N != V.tq.N || W.tq.dbl.num_vertices() != V.tq.dbl.num_vertices() ||
        W.tq.dbl.num_arrows() != V.tq.dbl.num_arrows())
        throw ShapeMismatch("graded_hom modules live on different tripled quivers");
    if (W.field != V.field) throw FieldMismatch("graded_hom fields differ");
    const auto& qd = W.tq.dbl;
    const int N = W.tq.N;
    const int nv = qd.num_vertices();

    HomSystem sys;
    sys.var_offset.resize(nv * (N + 1), 0);
    for (int i = 0; i < nv; ++i)
        for (int n = 0; n <= N; ++n) {
            sys.var_offset[i * (N + 1) + n] = sys.num_vars;
            sys.num_vars += V.dim_at(i, n) * W.dim_at(i, n);
        }

    // rows: arrow equations + t-map equations
    int num_rows = 0;
    for (int h = 0; h < qd.num_arrows(); ++h)
        for (int n = 0; n < N; ++n) num_rows += V.dim_at(qd.tgt(h), n + 1) * W.dim_at(qd.src(h), n);
    for (int i = 0; i < nv; ++i)
        for (int n = 0; n < N; ++n) num_rows += V.dim_at(i, n + 1) * W.dim_at(i, n);

    sys.mat = ExactMatrix(W.field, num_rows, sys.num_vars);
    int row0 = 0;
    auto add_equation = [&](int src_idx, int tgt_idx, const ExactMatrix& Wmap,
                            const ExactMatrix& Vmap, int rows, int cols) {
        // Phi_tgt * Wmap - Vmap * Phi_src = 0, entry (r,c):
        //   sum_k Phi_tgt[r,k] Wmap[k,c] - sum_k Vmap[r,k] Phi_src[k,c]
        const int ts_rows = static_cast<int>(Wmap.rows()); // = dim W at src... used below
        (void)ts_rows;
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                const int row = row0 + r * cols + c;
                for (size_t k = 0; k < Wmap.rows(); ++k) {
                    // Phi_tgt has shape rows x Wmap.rows()
                    sys.mat.at(row, sys.var_offset[tgt_idx] + r * Wmap.rows() + k) =
                        Wmap.at(k, c);
                }
                for (size_t k = 0; k < Vmap.cols(); ++k) {
                    auto& cell =
                        sys.mat.at(row, sys.var_offset[src_idx] + k * cols + c);
                    cell = cell - Vmap.at(r, k);
                }
            }
        row0 += rows * cols;
    };

    for (int h = 0; h < qd.num_arrows(); ++h)
        for (int n = 0; n < N; ++n)
            add_equation(qd.src(h) * (N + 1) + n, qd.tgt(h) * (N + 1) + (n + 1),
                         W.Xh[h][n], V.Xh[h][n], V.dim_at(qd.tgt(h), n + 1),
                         W.dim_at(qd.src(h), n));
    for (int i = 0; i < nv; ++i)
        for (int n = 0; n < N; ++n)
            add_equation(i * (N + 1) + n, i * (N + 1) + (n + 1), W.Tt[i][n], V.Tt[i][n],
                         V.dim_at(i, n + 1), W.dim_at(i, n));
    return sys;
}

} // namespace

GradedHom graded_hom(const GradedModule& W, const GradedModule& V) {
    HomSystem sys = assemble_graded_hom(W, V);
    GradedHom out;
    if (sys.num_vars == 0) {
        out.dim = 0;
        return out;
    }
    if (W.field.dual()) {
        // eps-split: kernel of [[M0,0],[M1,M0]] over the base field
        ExactMatrix m0 = sys.mat.value_part();
        ExactMatrix m1 = sys.mat.eps_part();
        ExactMatrix top = m0.hstack(ExactMatrix::zero(m0.field(), m0.rows(), m0.cols()));
        ExactMatrix bot = m1.hstack(m0);
        out.dim = rank_kernel(top.vstack(bot)).kernel.cols();
        return out;
    }
    RankKernel rk = rank_kernel(sys.mat);
    out.dim = rk.kernel.cols();
    const auto& qd = W.tq.dbl;
    const int N = W.tq.N;
    for (size_t k = 0; k < rk.kernel.cols(); ++k) {
        std::vector<ExactMatrix> blocks;
        for (int i = 0; i < qd.num_vertices(); ++i)
            for (int n = 0; n <= N; ++n) {
                const int idx = i * (N + 1) + n;
                ExactMatrix blk(W.field, V.dim_at(i, n), W.dim_at(i, n));
                for (int r = 0; r < V.dim_at(i, n); ++r)
                    for (int c = 0; c < W.dim_at(i, n); ++c)
                        blk.at(r, c) =
                            rk.kernel.at(sys.var_offset[idx] + r * W.dim_at(i, n) + c, k);
                blocks.push_back(std::move(blk));
            }
        out.basis.push_back(std::move(blocks));
    }
    return out;
}

size_t rep_hom_dim(const Representation& A, const Representation& B) {
    const auto& qd = A.qd;
    if (B.qd.num_arrows() != qd.num_arrows()) throw ShapeMismatch("rep_hom quivers differ");
    std::vector<int> var_offset(qd.num_vertices(), 0);
    int num_vars = 0;
    for (int i = 0; i < qd.num_vertices(); ++i) {
        var_offset[i] = num_vars;
        num_vars += B.alpha.dims[i] * A.alpha.dims[i];
    }
    int num_rows = 0;
    for (int h = 0; h < qd.num_arrows(); ++h)
        num_rows += B.alpha.dims[qd.tgt(h)] * A.alpha.dims[qd.src(h)];
    ExactMatrix sys(A.field, num_rows, num_vars);
    int row0 = 0;
    for (int h = 0; h < qd.num_arrows(); ++h) {
        const int rows = B.alpha.dims[qd.tgt(h)];
        const int cols = A.alpha.dims[qd.src(h)];
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                const int row = row0 + r * cols + c;
                for (size_t k = 0; k < A.X[h].rows(); ++k)
                    sys.at(row, var_offset[qd.tgt(h)] + r * A.X[h].rows() + k) =
                        A.X[h].at(k, c);
                for (size_t k = 0; k < B.X[h].cols(); ++k) {
                    auto& cell = sys.at(row, var_offset[qd.src(h)] + k * cols + c);
                    cell = cell - B.X[h].at(r, k);
                }
            }
        row0 += rows * cols;
    }
    if (num_vars == 0) return 0;
    return rank_kernel(sys).kernel.cols();
}

// ---------------------------------------------------------------------------

namespace {

// Per-vertex polynomial relation residual, no inverses:
// P_i - q_i S_i with P_i = B(g_{a_g})...B(g_{a_1}), S_i = B(g_{a_1*})...B(g_{a_g*}).
std::vector<ExactMatrix> polynomial_residual(const Representation& R,
                                             const std::vector<Scalar>& q) {
    const auto& qd = R.qd;
    const int g = qd.g();
    std::vector<ExactMatrix> out;
    for (int i = 0; i < qd.num_vertices(); ++i) {
        ExactMatrix P = ExactMatrix::identity(R.field, R.alpha.dims[i]);
        for (int j = 0; j < g; ++j) P = g_block_at(R, j, i) * P;
        ExactMatrix S = ExactMatrix::identity(R.field, R.alpha.dims[i]);
        for (int j = g - 1; j >= 0; --j) S = g_block_at(R, g + j, i) * S;
        out.push_back(P - S * q[i]);
    }
    return out;
}

} // namespace

TangentReport tangent_dim(const Representation& R, const std::vector<Scalar>& q) {
    CheckReport base = check_rep(R, q);
    if (!base.pass) throw ConsistencyError("tangent_dim at a point violating the relation");

    const Field dual = R.field.with_dual();
    Representation Rd;
    Rd.qd = R.qd;
    Rd.alpha = R.alpha;
    Rd.field = dual;
    Rd.X.resize(R.X.size());
    for (size_t h = 0; h < R.X.size(); ++h) {
        Rd.X[h] = ExactMatrix(dual, R.X[h].rows(), R.X[h].cols());
        for (size_t r = 0; r < R.X[h].rows(); ++r)
            for (size_t c = 0; c < R.X[h].cols(); ++c)
                Rd.X[h].at(r, c) =
                    Scalar::with_eps(R.X[h].at(r, c), Scalar::zero(R.field));
    }
    std::vector<Scalar> qd_dual;
    for (const auto& qi : q) qd_dual.push_back(Scalar::with_eps(qi, Scalar::zero(R.field)));

    int total_dirs = 0;
    for (size_t h = 0; h < R.X.size(); ++h)
        total_dirs += static_cast<int>(R.X[h].rows() * R.X[h].cols());
    int total_eqs = 0;
    for (int d : R.alpha.dims) total_eqs += d * d;

    ExactMatrix jac(R.field, total_eqs, total_dirs);
    int col = 0;
    for (size_t h = 0; h < R.X.size(); ++h)
        for (size_t r = 0; r < R.X[h].rows(); ++r)
            for (size_t c = 0; c < R.X[h].cols(); ++c) {
                Rd.X[h].at(r, c) =
                    Scalar::with_eps(R.X[h].at(r, c), Scalar::one(R.field));
                std::vector<ExactMatrix> res = polynomial_residual(Rd, qd_dual);
                Rd.X[h].at(r, c) =
                    Scalar::with_eps(R.X[h].at(r, c), Scalar::zero(R.field));
                int row = 0;
                for (const auto& m : res)
                    for (size_t rr = 0; rr < m.rows(); ++rr)
                        for (size_t cc = 0; cc < m.cols(); ++cc)
                            jac.at(row++, col) = m.at(rr, cc).eps_part();
                ++col;
            }

    TangentReport rep;
    rep.tangent_dim = total_dirs - static_cast<long>(rank_of(jac));
    long gauge = -1;
    for (int d : R.alpha.dims) gauge += static_cast<long>(d) * d;
    rep.moduli_dim = rep.tangent_dim - gauge;
    return rep;
}

} // namespace mqv
