// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion.  Exact arithmetic throughout; every
// comparison is equality, no epsilons.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "mqv/driver.hpp"
#include "mqv/ext.hpp"

using namespace mqv;

namespace {

const Field F = Field::rational();
int g_failures = 0;

void report(int criterion, const std::string& what, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << "\n";
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Quiver loops(int g) {
    Quiver q;
    q.vertices = {"v"};
    for (int i = 0; i < g; ++i) q.arrows.push_back({std::string(1, char('a' + i)), 0, 0});
    return q;
}

Quiver two_vertex() { return Quiver{{"1", "2"}, {{"a", 0, 1}}}; }

Quiver three_chain() { return Quiver{{"1", "2", "3"}, {{"a", 0, 1}, {"b", 1, 2}}}; }

PathCtxPtr ctx_for(const DoubledQuiver& qd, const Field& f = F) {
    return std::make_shared<const PathCtx>(PathCtx{qd, f});
}

std::vector<Scalar> qconst(const Field& f, int nv, const Scalar& v) {
    return std::vector<Scalar>(nv, v);
}

Representation scalar_chain_rep() {
    // three-vertex chain, alpha (1,1,1), q = (-1,1,-1):
    // 1 + x_{a*} x_a = -1 and 1 + x_b x_{b*} = -1
    Representation R;
    R.qd = make_double(three_chain());
    R.alpha = DimVector{{1, 1, 1}};
    R.field = F;
    auto m1 = [&](long v) {
        ExactMatrix m(F, 1, 1);
        m.at(0, 0) = Scalar::from_int(F, v);
        return m;
    };
    R.X = {m1(1), m1(1), m1(-2), m1(-2)}; // a, b, a*, b*
    return R;
}

ExactMatrix mat2(long a, long b, long c, long d) {
    ExactMatrix m(F, 2, 2);
    m.at(0, 0) = Scalar::from_int(F, a);
    m.at(0, 1) = Scalar::from_int(F, b);
    m.at(1, 0) = Scalar::from_int(F, c);
    m.at(1, 1) = Scalar::from_int(F, d);
    return m;
}

Representation r1() {
    Representation R;
    R.qd = make_double(loops(1));
    R.alpha = DimVector{{2}};
    R.field = F;
    R.X = {mat2(0, 1, 0, 0), mat2(0, 0, -2, 0)};
    return R;
}

// Samples until the mod-p subspace search certifies stability; advances the
// seed deterministically.
SampleResult stable_sample(const DoubledQuiver& qd, const DimVector& alpha,
                           const std::vector<Scalar>& q, const Field& f,
                           std::uint64_t seed, long p, int max_tries = 32) {
    for (int k = 0; k < max_tries; ++k) {
        SampleResult sr = sample_rep(qd, alpha, q, f, seed + 1000 * k);
        StabilityVector theta{std::vector<Rat>(qd.num_vertices(), Rat(0))};
        StabilityVerdict v = verdict(sr.rep, theta, usable_prime(sr.rep, p));
        if (v.kind == VerdictKind::CertifiedStable) return sr;
    }
    throw RetryExhausted("no stable sample found");
}

// --------------------------------------------------------------------------

void criterion1_identities() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    struct Case {
        Quiver q;
        std::vector<long> qvals;
    };
    std::vector<Case> cases = {
        {loops(1), {-1}}, {loops(2), {1}}, {loops(3), {1}},
        {two_vertex(), {2, 3}}, {three_chain(), {-1, 1, -1}},
    };
    for (const auto& c : cases) {
        auto ctx = ctx_for(make_double(c.q));
        std::vector<Scalar> q;
        for (long v : c.qvals) q.push_back(Scalar::from_int(F, v));
        IdentityReport rep = identity_suite(ctx, q);
        if (!rep.all_pass()) {
            pass = false;
            detail = "failure on quiver with " + std::to_string(c.q.arrows.size()) + " arrows";
        }
    }
    double secs = seconds_since(t0);
    if (secs >= 1.0) {
        pass = false;
        detail += " runtime " + std::to_string(secs) + "s >= 1s";
    }
    report(1, "symbolic identity suite on 5 quivers", pass, detail);
}

void criterion2_sampler() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    int samples = 0;

    struct Family {
        DoubledQuiver qd;
        DimVector alpha;
        Field field;
        std::vector<Scalar> q;
        int count;
    };
    Field c3 = Field::cyclotomic(3);
    std::vector<Family> families = {
        {make_double(loops(1)), DimVector{{2}}, F, qconst(F, 1, Scalar::from_int(F, -1)), 25},
        {make_double(loops(2)), DimVector{{2}}, F, qconst(F, 1, Scalar::from_int(F, 1)), 25},
        {make_double(loops(2)), DimVector{{3}}, c3, qconst(c3, 1, Scalar::cyclotomic_root(3, 1)), 20},
        {make_double(loops(1)), DimVector{{1}}, F, qconst(F, 1, Scalar::from_int(F, 1)), 15},
        {make_double(two_vertex()), DimVector{{1, 1}}, F, qconst(F, 2, Scalar::from_int(F, -1)), 15},
    };
    for (const auto& fam : families) {
        for (int k = 0; k < fam.count; ++k) {
            try {
                SampleResult sr =
                    sample_rep(fam.qd, fam.alpha, fam.q, fam.field, 7000 + 13 * k);
                bool zero = sr.certificate.pass;
                for (const auto& m : sr.certificate.residuals) zero = zero && m.is_zero();
                if (!zero) {
                    pass = false;
                    detail = "nonzero residual";
                }
                ++samples;
            } catch (const Error& e) {
                pass = false;
                detail = std::string("sampler error: ") + e.error_name;
            }
        }
    }
    // obstruction rejection happens before sampling
    try {
        (void)sample_rep(make_double(loops(1)), DimVector{{2}},
                         qconst(c3, 1, Scalar::cyclotomic_root(3, 1)), c3, 1);
        pass = false;
        detail = "obstructed q accepted";
    } catch (const ObstructionError&) {
    }
    try {
        (void)sample_rep(make_double(two_vertex()), DimVector{{1, 1}},
                         {Scalar::from_int(F, 2), Scalar::from_int(F, 1)}, F, 1);
        pass = false;
        detail = "obstructed q accepted";
    } catch (const ObstructionError&) {
    }
    if (samples < 100) {
        pass = false;
        detail = "only " + std::to_string(samples) + " samples";
    }
    double secs = seconds_since(t0);
    if (secs >= 30.0) {
        pass = false;
        detail += " runtime " + std::to_string(secs) + "s >= 30s";
    }
    report(2, "sampler soundness, " + std::to_string(samples) + " exact samples", pass, detail);
}

void criterion3_stability() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;

    // R1 certified stable by the exhaustive F_5 search
    {
        StabilityVector theta{{Rat(0)}};
        StabilityVerdict v = verdict(r1(), theta, 5);
        if (v.kind != VerdictKind::CertifiedStable) {
            pass = false;
            detail = "R1 not certified stable";
        }
    }
    // R1 + R1: semistable, not stable, exact witness with pairing 0
    {
        Representation RR = r1().direct_sum(r1());
        StabilityVector theta{{Rat(0)}};
        StabilityVerdict v = verdict(RR, theta, 5);
        if (v.kind != VerdictKind::CertifiedSemistableOnly || !v.witness ||
            !(v.witness->pairing_value == 0)) {
            pass = false;
            detail = "R1+R1 verdict wrong";
        }
    }
    // ind_compat on >= 20 instances with sum alpha <= 6
    int agreements = 0, total = 0;
    auto run_case = [&](const Representation& R, const StabilityVector& theta, int N,
                        long p, int bound) {
        ++total;
        SearchBounds sb;
        sb.total_dim = bound;
        sb.prime_max = 7;
        try {
            IndCompatReport ic = ind_compat_report(R, theta, N, default_T(theta, R.alpha, N),
                                                   usable_prime(R, p, sb), sb);
            if (ic.agree) ++agreements;
            else {
                pass = false;
                detail = "ind_compat disagreement";
            }
        } catch (const Error& e) {
            pass = false;
            detail = std::string("ind_compat error: ") + e.error_name;
        }
    };

    // one-loop alpha=2, three seeds, theta = 0
    for (std::uint64_t s : {1ULL, 2ULL, 3ULL}) {
        SampleResult sr = sample_rep(make_double(loops(1)), DimVector{{2}},
                                     qconst(F, 1, Scalar::from_int(F, -1)), F, s);
        run_case(sr.rep, StabilityVector{{Rat(0)}}, 2, 5, 9);
    }
    // explicit R1 and R1+R1 (p = 2 keeps the graded search small)
    run_case(r1(), StabilityVector{{Rat(0)}}, 2, 5, 9);
    run_case(r1().direct_sum(r1()), StabilityVector{{Rat(0)}}, 2, 2, 12);
    // one-loop alpha=3, q=1, two seeds
    for (std::uint64_t s : {4ULL, 5ULL}) {
        SampleResult sr = sample_rep(make_double(loops(1)), DimVector{{3}},
                                     qconst(F, 1, Scalar::from_int(F, 1)), F, s);
        run_case(sr.rep, StabilityVector{{Rat(0)}}, 2, 5, 9);
    }
    // two-vertex (1,1): three thetas x two seeds
    for (std::uint64_t s : {6ULL, 7ULL}) {
        SampleResult sr = sample_rep(make_double(two_vertex()), DimVector{{1, 1}},
                                     qconst(F, 2, Scalar::from_int(F, -1)), F, s);
        for (const auto& th : {std::vector<Rat>{1, -1}, std::vector<Rat>{0, 0},
                               std::vector<Rat>{-2, 2}})
            run_case(sr.rep, StabilityVector{th}, 2, 5, 9);
    }
    // two loops alpha=1, q=1, N=4, three seeds
    for (std::uint64_t s : {8ULL, 9ULL, 10ULL}) {
        SampleResult sr = sample_rep(make_double(loops(2)), DimVector{{1}},
                                     qconst(F, 1, Scalar::from_int(F, 1)), F, s);
        run_case(sr.rep, StabilityVector{{Rat(0)}}, 4, 5, 9);
    }
    // two loops alpha=2, q=1, N=4, two seeds
    for (std::uint64_t s : {11ULL, 12ULL}) {
        SampleResult sr = sample_rep(make_double(loops(2)), DimVector{{2}},
                                     qconst(F, 1, Scalar::from_int(F, 1)), F, s);
        run_case(sr.rep, StabilityVector{{Rat(0)}}, 4, 5, 10);
    }
    // three-vertex chain, explicit scalars, three thetas
    {
        Representation R = scalar_chain_rep();
        for (const auto& th : {std::vector<Rat>{1, 0, -1}, std::vector<Rat>{0, 0, 0},
                               std::vector<Rat>{2, -1, -1}})
            run_case(R, StabilityVector{th}, 4, 5, 15);
    }

    if (total < 20) {
        pass = false;
        detail = "only " + std::to_string(total) + " ind_compat instances";
    }
    double secs = seconds_since(t0);
    if (secs >= 120.0) {
        pass = false;
        detail += " runtime " + std::to_string(secs) + "s >= 120s";
    }
    report(3,
           "stability certificates and Ind-compatibility on " + std::to_string(total) +
               " instances (" + std::to_string(agreements) + " agree)",
           pass, detail);
}

struct PairStats {
    int pairs = 0;
    bool structure_ok = true;   // criterion 4
    bool ext_ok = true;         // criterion 5
    bool phi_ok = true;         // criterion 6
    std::string detail4, detail5, detail6;
};

void run_pair(PairStats& st, const Representation& A, const Representation& B,
              const std::vector<Scalar>& q, int N, bool expect_iso) {
    auto ctx = ctx_for(A.qd, A.field);
    RelationElements rel = build_relation(ctx, q);
    ExtComplex C = build_ext_complex(induce(A, N), induce(B, N), rel);
    ComplexReport cr = complex_report(C);
    ++st.pairs;

    if (!cr.is_complex || !cr.euler_ok || !cr.expected_rank_match ||
        !cr.differentials_cross_ok) {
        st.structure_ok = false;
        st.detail4 = "structure failure";
    }
    // At stable points: expected_rank = moduli_dim - 2, zero tolerance
    TangentReport tr = tangent_dim(A, q);
    if (cr.expected_rank_value != tr.moduli_dim - 2) {
        st.structure_ok = false;
        st.detail4 = "rank != moduli_dim - 2";
    }

    long expect_h = expect_iso ? 1 : 0;
    if (cr.h_minus1 != expect_h || cr.h1 != expect_h || !cr.hom_cross_ok) {
        st.ext_ok = false;
        st.detail5 = "h^{-1}/h^1 mismatch (expected " + std::to_string(expect_h) + ")";
    }

    PhiReport pr = phi_correspondence(C);
    if (!pr.dims_equal || !pr.forward_maps_valid || !pr.round_trip_ok) {
        st.phi_ok = false;
        st.detail6 = "phi correspondence failure";
    }
}

void criteria456_ext(PairStats& st) {
    auto t0 = std::chrono::steady_clock::now();

    // (1,2,-1): primitive q, stability automatic
    {
        DoubledQuiver qd = make_double(loops(1));
        auto q = qconst(F, 1, Scalar::from_int(F, -1));
        std::vector<Representation> reps;
        for (std::uint64_t s : {21ULL, 22ULL, 23ULL, 24ULL})
            reps.push_back(sample_rep(qd, DimVector{{2}}, q, F, s).rep);
        reps.push_back(r1());
        for (const auto& r : reps) run_pair(st, r, r, q, 2, true);
        for (size_t i = 0; i + 1 < reps.size(); ++i) {
            if (rep_hom_dim(reps[i], reps[i + 1]) != 0) continue;
            run_pair(st, reps[i], reps[i + 1], q, 2, false);
        }
    }
    // (2,2,1): stability checked by the subspace search
    {
        DoubledQuiver qd = make_double(loops(2));
        auto q = qconst(F, 1, Scalar::from_int(F, 1));
        std::vector<Representation> reps;
        for (std::uint64_t s : {31ULL, 32ULL, 33ULL, 34ULL, 35ULL})
            reps.push_back(stable_sample(qd, DimVector{{2}}, q, F, s, 5).rep);
        for (const auto& r : reps) run_pair(st, r, r, q, 4, true);
        for (size_t i = 0; i + 1 < reps.size(); ++i) {
            if (rep_hom_dim(reps[i], reps[i + 1]) != 0) continue;
            run_pair(st, reps[i], reps[i + 1], q, 4, false);
        }
    }
    // (1,1,1): one-dimensional, stable iff nonzero; distinct points non-isomorphic
    {
        DoubledQuiver qd = make_double(loops(1));
        auto q = qconst(F, 1, Scalar::from_int(F, 1));
        std::vector<Representation> reps;
        for (std::uint64_t s : {41ULL, 42ULL, 43ULL, 44ULL, 45ULL, 46ULL})
            reps.push_back(sample_rep(qd, DimVector{{1}}, q, F, s).rep);
        for (const auto& r : reps) run_pair(st, r, r, q, 2, true);
        for (size_t i = 0; i + 1 < reps.size(); ++i) {
            if (rep_hom_dim(reps[i], reps[i + 1]) != 0) continue;
            run_pair(st, reps[i], reps[i + 1], q, 2, false);
        }
    }
    // two-vertex (1,1)
    {
        DoubledQuiver qd = make_double(two_vertex());
        auto q = qconst(F, 2, Scalar::from_int(F, -1));
        std::vector<Representation> reps;
        for (std::uint64_t s : {51ULL, 52ULL, 53ULL})
            reps.push_back(sample_rep(qd, DimVector{{1, 1}}, q, F, s).rep);
        for (const auto& r : reps) run_pair(st, r, r, q, 2, true);
        for (size_t i = 0; i + 1 < reps.size(); ++i) {
            if (rep_hom_dim(reps[i], reps[i + 1]) != 0) continue;
            run_pair(st, reps[i], reps[i + 1], q, 2, false);
        }
    }

    double secs = seconds_since(t0);
    bool time_ok = secs < 120.0;
    report(4, "complex structure on " + std::to_string(st.pairs) + " pairs",
           st.structure_ok, st.detail4);
    report(5, "Ext propositions on " + std::to_string(st.pairs) + " pairs",
           st.ext_ok && st.pairs >= 30 && time_ok,
           st.pairs < 30 ? "fewer than 30 pairs" : (time_ok ? st.detail5 : "over 2 min"));
    report(6, "phi* <-> Phi* correspondence", st.phi_ok, st.detail6);
}

void criterion7_memberships() {
    bool pass = true;
    std::string detail;
    auto run_membership = [&](const Representation& R, const std::vector<Scalar>& q, int N) {
        auto ctx = ctx_for(R.qd, R.field);
        RelationElements rel = build_relation(ctx, q);
        ExtComplex C = build_ext_complex(induce(R, N), induce(R, N), rel);
        MembershipReport mr = verify_bimodule_memberships(C);
        if (!mr.all_pass) {
            pass = false;
            detail = mr.first_failure.empty() ? "alpha-dual identity failure"
                                              : mr.first_failure;
        }
    };
    Field c3 = Field::cyclotomic(3);
    run_membership(r1(), qconst(F, 1, Scalar::from_int(F, -1)), 2);
    run_membership(sample_rep(make_double(loops(1)), DimVector{{1}},
                              qconst(F, 1, Scalar::from_int(F, 1)), F, 61)
                       .rep,
                   qconst(F, 1, Scalar::from_int(F, 1)), 2);
    run_membership(sample_rep(make_double(loops(1)), DimVector{{3}},
                              qconst(F, 1, Scalar::from_int(F, 1)), F, 62)
                       .rep,
                   qconst(F, 1, Scalar::from_int(F, 1)), 2);
    run_membership(sample_rep(make_double(loops(2)), DimVector{{2}},
                              qconst(F, 1, Scalar::from_int(F, 1)), F, 63)
                       .rep,
                   qconst(F, 1, Scalar::from_int(F, 1)), 4);
    run_membership(sample_rep(make_double(loops(2)), DimVector{{3}},
                              qconst(c3, 1, Scalar::cyclotomic_root(3, 1)), c3, 64)
                       .rep,
                   qconst(c3, 1, Scalar::cyclotomic_root(3, 1)), 4);
    run_membership(sample_rep(make_double(two_vertex()), DimVector{{1, 1}},
                              qconst(F, 2, Scalar::from_int(F, -1)), F, 65)
                       .rep,
                   qconst(F, 2, Scalar::from_int(F, -1)), 2);
    report(7, "column-space membership of the bimodule element families", pass, detail);
}

void criterion8_determinism(const std::string& instances_dir) {
    bool pass = true;
    std::string detail;
    std::ifstream in(instances_dir + "/loop_g1_n2.json");
    if (!in) {
        report(8, "determinism of verify-all", false, "bundled instance not found");
        return;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    RunResult a = run_command("verify-all", text);
    RunResult b = run_command("verify-all", text);
    if (a.report_json != b.report_json) {
        pass = false;
        detail = "reports differ between runs";
    }
    if (a.exit_code != 0) {
        pass = false;
        detail = "verify-all exit code " + std::to_string(a.exit_code);
    }
    report(8, "byte-identical verify-all reports", pass, detail);
}

} // namespace

int main(int argc, char** argv) {
    const std::string instances_dir = argc > 1 ? argv[1] : "instances";
    try {
        criterion1_identities();
        criterion2_sampler();
        criterion3_stability();
        PairStats st;
        criteria456_ext(st);
        criterion7_memberships();
        criterion8_determinism(instances_dir);
    } catch (const Error& e) {
        std::cout << "FAIL: unexpected " << e.error_name << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cout << "FAIL: unexpected exception: " << e.what() << "\n";
        return 1;
    }
    std::cout << (g_failures == 0 ? "ALL CRITERIA PASS" : "FAILURES PRESENT") << "\n";
    return g_failures == 0 ? 0 : 1;
}
