#include "mqv/driver.hpp"

#include <chrono>
#include <sstream>

#include <json.hpp>

#include "mqv/ext.hpp"

namespace mqv {

using nlohmann::json;

namespace {

struct Pipeline {
    InstanceFile inst;
    RunOptions opts;
    json checks = json::array();
    json timings = json::object();
    bool all_pass = true;
    bool bounded_skip = false;

    std::uint64_t seed() const { return opts.seed ? *opts.seed : inst.seed; }
    long prime() const { return opts.prime ? *opts.prime : default_prime(inst); }

    void add_check(const std::string& name, bool pass, json details = json::object()) {
        details["name"] = name;
        details["pass"] = pass;
        checks.push_back(details);
        if (!pass) all_pass = false;
    }
    void add_skip(const std::string& name, const std::string& why) {
        json d;
        d["name"] = name;
        d["skipped"] = why;
        d["pass"] = true;
        checks.push_back(d);
        bounded_skip = true;
    }

    template <class F>
    bool timed(const std::string& name, F&& f) {
        auto start = std::chrono::steady_clock::now();
        bool ok = true;
        try {
            f();
        } catch (const TooLarge&) {
            throw; // resource bounds surface as exit code 3
        } catch (const Error& e) {
            add_check(name, false, {{"error", e.error_name}, {"message", e.what()}});
            ok = false;
        }
        if (opts.with_timings) {
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
            timings[name] = ms;
        }
        return ok;
    }
};

json verdict_json(const StabilityVerdict& v) {
    json d;
    d["kind"] = to_string(v.kind);
    d["prime"] = v.prime;
    d["tuples_enumerated"] = v.stats.tuples_enumerated.str();
    d["expected_tuples"] = v.stats.expected_tuples.str();
    d["invariant_tuples"] = v.stats.invariant_tuples.str();
    if (v.witness) {
        json w;
        w["sub_dims"] = v.witness->sub_dims.dims;
        std::ostringstream os;
        os << v.witness->pairing_value;
        w["pairing"] = os.str();
        json bases = json::array();
        for (const auto& b : v.witness->bases) {
            json rows = json::array();
            for (size_t r = 0; r < b.rows(); ++r) {
                json row = json::array();
                for (size_t c = 0; c < b.cols(); ++c) row.push_back(b.at(r, c).str());
                rows.push_back(row);
            }
            bases.push_back(rows);
        }
        w["bases"] = bases;
        d["witness"] = w;
    }
    return d;
}

json matrix_json(const ExactMatrix& m) {
    json rows = json::array();
    for (size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c).str());
        rows.push_back(row);
    }
    return rows;
}

json complex_json(const ComplexReport& cr) {
    json d;
    d["dimL"] = cr.dimL;
    d["dimE"] = cr.dimE;
    d["dimLprime"] = cr.dimLp;
    d["rank_d0"] = cr.rank_d0;
    d["rank_d1"] = cr.rank_d1;
    d["h_minus1"] = cr.h_minus1;
    d["h0"] = cr.h0;
    d["h1"] = cr.h1;
    d["is_complex"] = cr.is_complex;
    d["euler_ok"] = cr.euler_ok;
    d["expected_rank"] = cr.expected_rank_value;
    d["expected_rank_match"] = cr.expected_rank_match;
    d["hom_tauV_W"] = cr.hom_tauV_W;
    d["hom_W_tauV"] = cr.hom_W_tauV;
    d["hom_cross_ok"] = cr.hom_cross_ok;
    d["differentials_cross_ok"] = cr.differentials_cross_ok;
    if (cr.first_order) {
        d["first_order"] = {{"found_direction", cr.first_order->found_direction},
                            {"dim_eps_diagonal", cr.first_order->dim_eps_diagonal},
                            {"dim_eps_nondiagonal", cr.first_order->dim_eps_nondiagonal},
                            {"pass", cr.first_order->pass}};
    }
    return d;
}

// Representation for the pipeline: explicit matrices when present, sampled
// otherwise.
Representation obtain_rep(Pipeline& p, json& details) {
    if (p.inst.has_matrices()) {
        details["source"] = "explicit";
        return p.inst.explicit_rep();
    }
    SamplerConfig cfg;
    cfg.box = p.inst.bounds.sampler_box;
    cfg.retries = p.inst.bounds.sampler_retries;
    SampleResult sr = sample_rep(p.inst.doubled(), p.inst.alpha, p.inst.q, p.inst.field,
                                 p.seed(), cfg);
    details["source"] = "sampled";
    details["attempts"] = sr.attempts;
    return sr.rep;
}

void run_identities(Pipeline& p) {
    p.timed("identity_suite", [&] {
        auto ctx = std::make_shared<const PathCtx>(PathCtx{p.inst.doubled(), p.inst.field});
        IdentityReport rep = identity_suite(ctx, p.inst.q);
        json d;
        json entries = json::array();
        for (const auto& e : rep.entries)
            entries.push_back({{"name", e.name}, {"pass", e.pass}, {"detail", e.detail}});
        d["identities"] = entries;
        if (p.opts.expr) {
            PathPoly parsed = parse_path_expr(ctx, *p.opts.expr);
            d["expr"] = *p.opts.expr;
            d["expr_normalized"] = parsed.str();
        }
        p.add_check("identity_suite", rep.all_pass(), d);
    });
}

bool run_sample_and_check(Pipeline& p, std::optional<Representation>& rep_out) {
    bool ok = p.timed("sample", [&] {
        json d;
        Representation R = obtain_rep(p, d);
        rep_out = R;
        p.add_check("sample", true, d);
    });
    if (!ok) return false;
    return p.timed("check", [&] {
        CheckReport cr = check_rep(*rep_out, p.inst.q);
        json d;
        d["q_alpha"] = cr.q_alpha.str();
        json residuals = json::array();
        for (const auto& m : cr.residuals) residuals.push_back(matrix_json(m));
        d["residuals"] = residuals;
        p.add_check("check", cr.pass, d);
    });
}

void run_stability(Pipeline& p, const Representation& R) {
    SearchBounds sb{p.inst.bounds.subspace_total_dim, p.inst.bounds.prime_max};
    long wp = 0;
    if (p.opts.prime) {
        wp = *p.opts.prime;
    } else {
        try {
            wp = usable_prime(R, p.prime(), sb);
        } catch (const BadPrime& e) {
            p.add_skip("stability", e.what());
            p.add_skip("ind_compat", e.what());
            return;
        }
    }
    p.timed("stability", [&] {
        StabilityVerdict v = verdict(R, p.inst.theta, wp, sb);
        bool pass = v.kind != VerdictKind::UnstableWithWitness;
        p.add_check("stability", pass, {{"verdict", verdict_json(v)}});
    });
    const int graded_total = (p.inst.N + 1) * R.alpha.total();
    if (graded_total > p.inst.bounds.subspace_total_dim) {
        p.add_skip("ind_compat",
                   "graded side dimension " + std::to_string(graded_total) +
                       " exceeds subspace_total_dim bound");
        return;
    }
    p.timed("ind_compat", [&] {
        IndCompatReport ic =
            ind_compat_report(R, p.inst.theta, p.inst.N, p.inst.effective_T(), wp, sb);
        json d;
        d["rep_side"] = verdict_json(ic.rep_side);
        d["graded_side"] = verdict_json(ic.graded_side);
        d["T"] = [&] {
            std::ostringstream os;
            os << p.inst.effective_T();
            return os.str();
        }();
        p.add_check("ind_compat", ic.agree, d);
    });
}

void run_ext(Pipeline& p, const Representation& R) {
    ExtComplex C;
    bool built = p.timed("ext_setup", [&] {
        auto ctx = std::make_shared<const PathCtx>(PathCtx{R.qd, p.inst.field});
        RelationElements rel = build_relation(ctx, p.inst.q);
        GradedModule V = induce(R, p.inst.N);
        C = build_ext_complex(V, V, rel);
    });
    if (!built) return;
    p.timed("complex_report", [&] {
        ComplexReport cr = complex_report(C, p.opts.first_order, p.seed());
        bool pass = cr.is_complex && cr.euler_ok && cr.expected_rank_match &&
                    cr.hom_cross_ok && cr.differentials_cross_ok &&
                    (!cr.first_order || cr.first_order->pass);
        p.add_check("complex_report", pass, complex_json(cr));
    });
    p.timed("phi_correspondence", [&] {
        PhiReport pr = phi_correspondence(C);
        bool pass = pr.dims_equal && pr.forward_maps_valid && pr.round_trip_ok;
        p.add_check("phi_correspondence", pass,
                    {{"dim_ker_dual", pr.dim_ker_dual},
                     {"dim_graded_hom", pr.dim_graded_hom},
                     {"forward_maps_valid", pr.forward_maps_valid},
                     {"round_trip_ok", pr.round_trip_ok}});
    });
    p.timed("bimodule_memberships", [&] {
        MembershipReport mr = verify_bimodule_memberships(C);
        p.add_check("bimodule_memberships", mr.all_pass,
                    {{"checked", mr.checked},
                     {"failed", mr.failed},
                     {"alpha_dual_identities_ok", mr.alpha_dual_identities_ok},
                     {"first_failure", mr.first_failure}});
    });
}

} // namespace

RunResult run_command(const std::string& command, const std::string& instance_text,
                      const RunOptions& opts) {
    RunResult result;
    json report;
    report["command"] = command;

    InstanceFile inst;
    try {
        inst = parse_instance(instance_text);
    } catch (const Error& e) {
        report["error"] = e.error_name;
        report["message"] = e.what();
        report["pass"] = false;
        result.exit_code = 2;
        result.report_json = report.dump(2);
        return result;
    }

    Pipeline p{inst, opts};
    report["instance_digest"] = instance_digest(inst);
    report["seed"] = p.seed();
    report["prime"] = p.prime();

    try {
        if (command == "validate") {
            p.add_check("validate", true, {{"canonical_digest", instance_digest(inst)}});
        } else if (command == "identities") {
            run_identities(p);
        } else if (command == "sample" || command == "check") {
            std::optional<Representation> R;
            run_sample_and_check(p, R);
        } else if (command == "stability") {
            std::optional<Representation> R;
            if (run_sample_and_check(p, R)) run_stability(p, *R);
        } else if (command == "ext") {
            std::optional<Representation> R;
            if (run_sample_and_check(p, R)) run_ext(p, *R);
        } else if (command == "verify-all") {
            run_identities(p);
            std::optional<Representation> R;
            if (p.all_pass && run_sample_and_check(p, R)) {
                run_stability(p, *R);
                run_ext(p, *R);
            }
        } else {
            report["error"] = "UsageError";
            report["message"] = "unknown command '" + command + "'";
            report["pass"] = false;
            result.exit_code = 2;
            result.report_json = report.dump(2);
            return result;
        }
    } catch (const TooLarge& e) {
        p.add_check(command, false, {{"error", e.error_name}, {"message", e.what()}});
        report["checks"] = p.checks;
        report["pass"] = false;
        result.exit_code = 3;
        result.report_json = report.dump(2);
        return result;
    }

    report["checks"] = p.checks;
    report["pass"] = p.all_pass;
    if (opts.with_timings) report["timings_ms"] = p.timings;
    result.exit_code = p.all_pass ? 0 : 1;
    result.report_json = report.dump(2);
    return result;
}

} // namespace mqv
