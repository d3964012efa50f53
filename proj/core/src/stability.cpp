#include "mqv/stability.hpp"

#include <algorithm>

namespace mqv {

int FpLinearData::total_dim() const {
    int t = 0;
    for (int d : dims) t += d;
    return t;
}

namespace {

long scalar_to_fp(const Scalar& s, long p) {
    return specialize_scalar_mod_p(s, p).fp();
}

std::vector<long> matrix_to_fp(const ExactMatrix& m, long p) {
    std::vector<long> out;
    out.reserve(m.rows() * m.cols());
    for (size_t r = 0; r < m.rows(); ++r)
        for (size_t c = 0; c < m.cols(); ++c) out.push_back(scalar_to_fp(m.at(r, c), p));
    return out;
}

} // namespace

FpLinearData fp_data_from_rep(const Representation& R, long p) {
    FpLinearData d;
    d.p = p;
    d.dims = R.alpha.dims;
    for (int h = 0; h < R.qd.num_arrows(); ++h)
        d.maps.push_back({R.qd.src(h), R.qd.tgt(h), matrix_to_fp(R.X[h], p)});
    return d;
}

FpLinearData fp_data_from_graded(const GradedModule& M, long p) {
    FpLinearData d;
    d.p = p;
    d.dims = M.dims;
    const auto& qd = M.tq.dbl;
    const int N = M.tq.N;
    for (int h = 0; h < qd.num_arrows(); ++h)
        for (int n = 0; n < N; ++n)
            d.maps.push_back({M.index_of(qd.src(h), n), M.index_of(qd.tgt(h), n + 1),
                              matrix_to_fp(M.Xh[h][n], p)});
    for (int i = 0; i < qd.num_vertices(); ++i)
        for (int n = 0; n < N; ++n)
            d.maps.push_back({M.index_of(i, n), M.index_of(i, n + 1),
                              matrix_to_fp(M.Tt[i][n], p)});
    return d;
}

Int gaussian_binomial(int n, int k, long p) {
    if (k < 0 || k > n) return 0;
    Int num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
        Int pn = 1, pd = 1;
        for (int e = 0; e < n - i; ++e) pn *= p;
        for (int e = 0; e < i + 1; ++e) pd *= p;
        num *= pn - 1;
        den *= pd - 1;
    }
    return num / den;
}

namespace {

// One subspace of F_p^d, stored as reduced row-echelon basis rows.
struct FpSubspace {
    int dim = 0;      // number of basis rows
    int ambient = 0;
    std::vector<long> rows;     // dim x ambient, RREF
    std::vector<int> pivots;

    // Reduce v by the basis rows in place; true iff it lands in the span.
    bool contains(std::vector<long>& v, long p) const {
        for (int r = 0; r < dim; ++r) {
            long c = v[pivots[r]];
            if (c == 0) continue;
            for (int j = 0; j < ambient; ++j)
                v[j] = ((v[j] - c * rows[r * ambient + j]) % p + p) % p;
        }
        return std::all_of(v.begin(), v.end(), [](long x) { return x == 0; });
    }
};

// All subspaces of F_p^d: every choice of pivot columns in increasing order,
// free entries ranging over F_p (the RREF parameterization).
std::vector<FpSubspace> all_subspaces(int d, long p) {
    std::vector<FpSubspace> out;
    for (int k = 0; k <= d; ++k) {
        std::vector<int> piv(k);
        for (int i = 0; i < k; ++i) piv[i] = i;
        while (true) {
            // free positions: (r, c) with c > piv[r], c not a pivot column
            std::vector<std::pair<int, int>> free_pos;
            std::vector<bool> is_piv(d, false);
            for (int c : piv) is_piv[c] = true;
            for (int r = 0; r < k; ++r)
                for (int c = piv[r] + 1; c < d; ++c)
                    if (!is_piv[c]) free_pos.emplace_back(r, c);
            std::vector<long> vals(free_pos.size(), 0);
            while (true) {
                FpSubspace s;
                s.dim = k;
                s.ambient = d;
                s.pivots = piv;
                s.rows.assign(static_cast<size_t>(k) * d, 0);
                for (int r = 0; r < k; ++r) s.rows[r * d + piv[r]] = 1;
                for (size_t i = 0; i < free_pos.size(); ++i)
                    s.rows[free_pos[i].first * d + free_pos[i].second] = vals[i];
                out.push_back(std::move(s));
                // odometer over free values
                size_t i = 0;
                for (; i < vals.size(); ++i) {
                    if (++vals[i] < p) break;
                    vals[i] = 0;
                }
                if (i == vals.size()) break;
                if (vals.empty()) break;
            }
            // next pivot combination
            int i = k - 1;
            while (i >= 0 && piv[i] == d - k + i) --i;
            if (i < 0) break;
            ++piv[i];
            for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
        }
        if (k == 0) continue; // the k=0 combination loop above ran once
    }
    return out;
}

// Basis images A.u for every map and every subspace of the source fiber,
// precomputed once; the tuple scan then only runs containment reductions.
struct ImageCache {
    // [map][subspace index at src]: rows x dim flat image vectors
    std::vector<std::vector<std::vector<long>>> img;
};

ImageCache build_image_cache(const FpLinearData& data,
                             const std::vector<std::vector<FpSubspace>>& menus) {
    ImageCache cache;
    cache.img.resize(data.maps.size());
    for (size_t mi = 0; mi < data.maps.size(); ++mi) {
        const auto& m = data.maps[mi];
        const int rows = data.dims[m.tgt], cols = data.dims[m.src];
        cache.img[mi].reserve(menus[m.src].size());
        for (const auto& s : menus[m.src]) {
            std::vector<long> flat(static_cast<size_t>(s.dim) * rows, 0);
            for (int b = 0; b < s.dim; ++b)
                for (int r = 0; r < rows; ++r) {
                    long acc = 0;
                    for (int c = 0; c < cols; ++c)
                        acc += m.entries[r * cols + c] * s.rows[b * cols + c];
                    flat[b * rows + r] = ((acc % data.p) + data.p) % data.p;
                }
            cache.img[mi].push_back(std::move(flat));
        }
    }
    return cache;
}

bool tuple_invariant(const FpLinearData& data, const ImageCache& cache,
                     const std::vector<size_t>& pick,
                     const std::vector<std::vector<FpSubspace>>& menus,
                     std::vector<long>& scratch) {
    for (size_t mi = 0; mi < data.maps.size(); ++mi) {
        const auto& m = data.maps[mi];
        const FpSubspace& src = menus[m.src][pick[m.src]];
        const FpSubspace& tgt = menus[m.tgt][pick[m.tgt]];
        const int rows = data.dims[m.tgt];
        const auto& flat = cache.img[mi][pick[m.src]];
        for (int b = 0; b < src.dim; ++b) {
            scratch.assign(flat.begin() + b * rows, flat.begin() + (b + 1) * rows);
            if (!tgt.contains(scratch, data.p)) return false;
        }
    }
    return true;
}

} // namespace

std::optional<Witness> destabilizer(const FpLinearData& data, const std::vector<Rat>& theta,
                                    const SearchBounds& bounds, SearchStats* stats) {
    if (data.total_dim() > bounds.total_dim)
        throw TooLarge("total dimension " + std::to_string(data.total_dim()) +
                       " exceeds search bound " + std::to_string(bounds.total_dim));
    if (data.p > bounds.prime_max)
        throw TooLarge("prime " + std::to_string(data.p) + " exceeds bound");
    if (theta.size() != data.dims.size()) throw IndexMismatch("theta length mismatch");

    const size_t nv = data.dims.size();
    std::vector<std::vector<FpSubspace>> menus;
    Int expected = 1;
    for (size_t i = 0; i < nv; ++i) {
        menus.push_back(all_subspaces(data.dims[i], data.p));
        Int per = 0;
        for (int k = 0; k <= data.dims[i]; ++k)
            per += gaussian_binomial(data.dims[i], k, data.p);
        expected *= per;
    }
    if (stats) {
        stats->expected_tuples = expected;
        stats->tuples_enumerated = 0;
        stats->invariant_tuples = 0;
    }

    ImageCache cache = build_image_cache(data, menus);
    std::optional<Witness> best;
    std::vector<size_t> pick(nv, 0);
    std::vector<const FpSubspace*> tuple(nv);
    std::vector<long> scratch;
    scratch.reserve(16);
    while (true) {
        for (size_t i = 0; i < nv; ++i) tuple[i] = &menus[i][pick[i]];
        if (stats) stats->tuples_enumerated += 1;

        int total = 0;
        bool whole = true;
        for (size_t i = 0; i < nv; ++i) {
            total += tuple[i]->dim;
            if (tuple[i]->dim != data.dims[i]) whole = false;
        }
        if (total > 0 && !whole && tuple_invariant(data, cache, pick, menus, scratch)) {
            if (stats) stats->invariant_tuples += 1;
            Rat pair = 0;
            for (size_t i = 0; i < nv; ++i) pair += theta[i] * tuple[i]->dim;
            if (!best || pair < best->pairing_value) {
                Witness w;
                w.pairing_value = pair;
                const Field fp = Field::prime(data.p);
                for (size_t i = 0; i < nv; ++i) {
                    w.sub_dims.dims.push_back(tuple[i]->dim);
                    ExactMatrix basis(fp, data.dims[i], tuple[i]->dim);
                    for (int b = 0; b < tuple[i]->dim; ++b)
                        for (int r = 0; r < data.dims[i]; ++r)
                            basis.at(r, b) = Scalar::from_int(
                                fp, tuple[i]->rows[b * data.dims[i] + r]);
                    w.bases.push_back(std::move(basis));
                }
                best = std::move(w);
            }
        }

        size_t i = 0;
        for (; i < nv; ++i) {
            if (++pick[i] < menus[i].size()) break;
            pick[i] = 0;
        }
        if (i == nv) break;
    }
    return best;
}

std::string to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::CertifiedStable: return "CertifiedStable";
        case VerdictKind::CertifiedSemistableOnly: return "CertifiedSemistableOnly";
        case VerdictKind::UnstableWithWitness: return "UnstableWithWitness";
        case VerdictKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

// King convention, forced by the theta^gtr lift T^i [delta_{i,N} - delta_{i,0}]:
// M is semistable iff every proper nonzero subrepresentation S has
// pairing(theta, dim S) >= 0, stable iff strictly positive.  A witness is a
// minimizing subrepresentation with pairing < 0 (violating semistability)
// or = 0 (violating strict stability).
StabilityVerdict classify(const FpLinearData& data, const std::vector<Rat>& theta,
                          long p, bool native_fp, const SearchBounds& bounds) {
    StabilityVerdict v;
    v.prime = p;
    auto w = destabilizer(data, theta, bounds, &v.stats);
    if (!w) {
        v.kind = VerdictKind::CertifiedStable;
    } else if (w->pairing_value == 0) {
        v.kind = VerdictKind::CertifiedSemistableOnly;
        v.witness = std::move(w);
    } else if (w->pairing_value < 0) {
        v.kind = native_fp ? VerdictKind::UnstableWithWitness : VerdictKind::Inconclusive;
        v.witness = std::move(w);
    } else {
        // invariant subspaces exist but all pair strictly positively
        v.kind = VerdictKind::CertifiedStable;
    }
    return v;
}

} // namespace

StabilityVerdict verdict(const Representation& R, const StabilityVector& theta, long p,
                         const SearchBounds& bounds) {
    const bool native = R.field.kind() == Field::Kind::Prime;
    if (native && R.field.characteristic() != p) throw BadPrime("instance is over another prime");
    return classify(fp_data_from_rep(R, p), theta.weights, p, native, bounds);
}

StabilityVerdict verdict_graded(const GradedModule& M, const StabilityVector& theta_gtr,
                                long p, const SearchBounds& bounds) {
    const bool native = M.field.kind() == Field::Kind::Prime;
    if (native && M.field.characteristic() != p) throw BadPrime("instance is over another prime");
    return classify(fp_data_from_graded(M, p), theta_gtr.weights, p, native, bounds);
}

IndCompatReport ind_compat_report(const Representation& R, const StabilityVector& theta,
                                  int N, const Rat& T, long p, const SearchBounds& bounds) {
    IndCompatReport rep;
    rep.rep_side = verdict(R, theta, p, bounds);
    GradedModule M = induce(R, N);
    StabilityVector tg = lift_stability(theta, R.alpha, R.qd.num_vertices(), N, T);
    rep.graded_side = verdict_graded(M, tg, p, bounds);
    rep.agree = rep.rep_side.kind == rep.graded_side.kind;
    return rep;
}

long usable_prime(const Representation& R, long preferred, const SearchBounds& bounds) {
    std::vector<long> candidates;
    if (preferred >= 2 && preferred <= bounds.prime_max) candidates.push_back(preferred);
    for (long p = 2; p <= bounds.prime_max; ++p) {
        bool prime = true;
        for (long d = 2; d * d <= p; ++d)
            if (p % d == 0) prime = false;
        if (prime && p != preferred) candidates.push_back(p);
    }
    for (long p : candidates) {
        try {
            (void)fp_data_from_rep(R, p);
            return p;
        } catch (const BadPrime&) {
        }
    }
    throw BadPrime("no usable prime within bounds (entry denominators block every candidate)");
}

} // namespace mqv
