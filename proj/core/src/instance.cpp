#include "mqv/instance.hpp"

#include <sstream>

#include <json.hpp>

namespace mqv {

using nlohmann::json;

namespace {

Rat parse_rat_text(const std::string& s) {
    size_t slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

Rat json_to_rat(const json& v, const std::string& what) {
    try {
        if (v.is_number_integer()) return Rat(static_cast<long long>(v.get<long long>()));
        if (v.is_string()) return parse_rat_text(v.get<std::string>());
    } catch (const std::exception&) {
    }
    throw ParseError("expected a rational for " + what);
}

std::string rat_to_str(const Rat& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << "/" << denominator(r);
    return os.str();
}

} // namespace

Representation InstanceFile::explicit_rep() const {
    if (!has_matrices()) throw ParseError("instance carries no explicit matrices");
    DoubledQuiver qd = doubled();
    Representation R;
    R.qd = qd;
    R.alpha = alpha;
    R.field = field;
    for (int h = 0; h < qd.num_arrows(); ++h) {
        auto it = matrices.find(qd.arrow_name(h));
        if (it == matrices.end())
            throw ParseError("missing matrix for arrow " + qd.arrow_name(h));
        R.X.push_back(it->second);
    }
    R.validate();
    return R;
}

Rat InstanceFile::effective_T() const {
    if (T) return *T;
    return default_T(theta, alpha, N);
}

InstanceFile parse_instance(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("instance JSON: ") + e.what());
    }
    auto need = [&](const char* key) -> const json& {
        if (!j.contains(key)) throw ParseError(std::string("missing key '") + key + "'");
        return j.at(key);
    };

    InstanceFile inst;
    {
        const json& f = need("field");
        std::string kind = f.value("kind", "");
        if (kind == "rational") {
            inst.field = Field::rational();
        } else if (kind == "cyclotomic") {
            if (!f.contains("m")) throw ParseError("cyclotomic field needs 'm'");
            inst.field = Field::cyclotomic(f.at("m").get<unsigned>());
        } else if (kind == "prime") {
            if (!f.contains("p")) throw ParseError("prime field needs 'p'");
            inst.field = Field::prime(f.at("p").get<long>());
        } else {
            throw ParseError("field.kind must be rational|cyclotomic|prime");
        }
    }
    {
        const json& q = need("quiver");
        if (!q.contains("vertices") || !q.contains("arrows"))
            throw ParseError("quiver needs 'vertices' and 'arrows'");
        for (const auto& v : q.at("vertices")) inst.quiver.vertices.push_back(v.get<std::string>());
        std::vector<Quiver::Arrow> declared;
        for (const auto& a : q.at("arrows")) {
            Quiver::Arrow ar;
            ar.name = a.value("name", "");
            if (ar.name.empty()) throw ParseError("arrow without a name");
            ar.src = inst.quiver.vertex_index(a.value("src", ""));
            ar.tgt = inst.quiver.vertex_index(a.value("tgt", ""));
            declared.push_back(ar);
        }
        if (q.contains("ordering")) {
            for (const auto& n : q.at("ordering")) {
                std::string name = n.get<std::string>();
                bool found = false;
                for (const auto& a : declared)
                    if (a.name == name) {
                        inst.quiver.arrows.push_back(a);
                        found = true;
                        break;
                    }
                if (!found) throw ParseError("ordering references unknown arrow '" + name + "'");
            }
            if (inst.quiver.arrows.size() != declared.size())
                throw ParseError("ordering must list every arrow exactly once");
        } else {
            inst.quiver.arrows = declared;
        }
        inst.quiver.validate();
    }
    const size_t nv = inst.quiver.vertices.size();
    {
        const json& a = need("alpha");
        if (!a.is_array() || a.size() != nv)
            throw ParseError("alpha must list one entry per vertex");
        for (const auto& v : a) {
            int d = v.get<int>();
            if (d < 0) throw ParseError("alpha entries must be >= 0");
            inst.alpha.dims.push_back(d);
        }
    }
    {
        const json& t = need("theta");
        if (!t.is_array() || t.size() != nv)
            throw ParseError("theta must list one entry per vertex");
        for (const auto& v : t) inst.theta.weights.push_back(json_to_rat(v, "theta"));
        if (pairing(inst.theta, inst.alpha) != 0)
            throw ParseError("theta pairs nonzero with alpha (sum theta_i alpha_i != 0)");
    }
    {
        const json& qv = need("q");
        if (!qv.is_array() || qv.size() != nv)
            throw ParseError("q must list one entry per vertex");
        for (const auto& v : qv) {
            Scalar s;
            if (inst.field.kind() == Field::Kind::Cyclotomic && v.is_number_integer()) {
                // root exponent k_i: q_i = zeta_m^{k_i}
                unsigned m = inst.field.cyclo_order();
                long k = v.get<long>();
                k = ((k % m) + m) % m;
                s = Scalar::cyclotomic_root(m, static_cast<unsigned>(k));
                if (s.field() != inst.field) s = Scalar::from_rat(inst.field, s.rat());
            } else if (v.is_string()) {
                s = Scalar::parse(inst.field, v.get<std::string>());
            } else if (v.is_number_integer()) {
                s = Scalar::from_int(inst.field, v.get<long>());
            } else {
                throw ParseError("q entries must be integers or canonical scalar strings");
            }
            if (s.is_zero()) throw ParseError("q entries must be nonzero");
            inst.q.push_back(s);
        }
    }
    inst.N = need("N").get<int>();
    if (j.contains("T")) inst.T = json_to_rat(j.at("T"), "T");
    inst.seed = j.value("seed", 0ULL);
    if (j.contains("bounds")) {
        const json& b = j.at("bounds");
        inst.bounds.subspace_total_dim = b.value("subspace_total_dim", 9);
        inst.bounds.prime_max = b.value("prime_max", 7L);
        inst.bounds.sampler_box = b.value("sampler_box", 3);
        inst.bounds.sampler_retries = b.value("sampler_retries", 64);
    }
    if (j.contains("matrices")) {
        DoubledQuiver qd = inst.doubled();
        const json& ms = j.at("matrices");
        for (int h = 0; h < qd.num_arrows(); ++h) {
            std::string name = qd.arrow_name(h);
            if (!ms.contains(name)) throw ParseError("matrices missing arrow '" + name + "'");
            const json& rows = ms.at(name);
            const int exp_rows = inst.alpha.dims[qd.tgt(h)];
            const int exp_cols = inst.alpha.dims[qd.src(h)];
            if (!rows.is_array() || static_cast<int>(rows.size()) != exp_rows)
                throw ParseError("matrix '" + name + "' must have " +
                                 std::to_string(exp_rows) + " rows");
            ExactMatrix m(inst.field, exp_rows, exp_cols);
            for (int r = 0; r < exp_rows; ++r) {
                const json& row = rows.at(r);
                if (!row.is_array() || static_cast<int>(row.size()) != exp_cols)
                    throw ParseError("matrix '" + name + "' row " + std::to_string(r) +
                                     " must have " + std::to_string(exp_cols) + " entries");
                for (int c = 0; c < exp_cols; ++c) {
                    const json& cell = row.at(c);
                    m.at(r, c) = cell.is_string()
                                     ? Scalar::parse(inst.field, cell.get<std::string>())
                                     : Scalar::from_int(inst.field, cell.get<long>());
                }
            }
            inst.matrices.emplace(name, std::move(m));
        }
    }
    return inst;
}

std::string canonical_instance_json(const InstanceFile& inst) {
    json j;
    switch (inst.field.kind()) {
        case Field::Kind::Rational: j["field"] = {{"kind", "rational"}}; break;
        case Field::Kind::Cyclotomic:
            j["field"] = {{"kind", "cyclotomic"}, {"m", inst.field.cyclo_order()}};
            break;
        case Field::Kind::Prime:
            j["field"] = {{"kind", "prime"}, {"p", inst.field.characteristic()}};
            break;
    }
    j["quiver"]["vertices"] = inst.quiver.vertices;
    j["quiver"]["arrows"] = json::array();
    for (const auto& a : inst.quiver.arrows)
        j["quiver"]["arrows"].push_back({{"name", a.name},
                                         {"src", inst.quiver.vertices[a.src]},
                                         {"tgt", inst.quiver.vertices[a.tgt]}});
    j["alpha"] = inst.alpha.dims;
    j["theta"] = json::array();
    for (const auto& w : inst.theta.weights) j["theta"].push_back(rat_to_str(w));
    j["q"] = json::array();
    for (const auto& s : inst.q) j["q"].push_back(s.str());
    j["N"] = inst.N;
    if (inst.T) j["T"] = rat_to_str(*inst.T);
    j["seed"] = inst.seed;
    j["bounds"] = {{"subspace_total_dim", inst.bounds.subspace_total_dim},
                   {"prime_max", inst.bounds.prime_max},
                   {"sampler_box", inst.bounds.sampler_box},
                   {"sampler_retries", inst.bounds.sampler_retries}};
    if (!inst.matrices.empty()) {
        json ms;
        for (const auto& [name, m] : inst.matrices) {
            json rows = json::array();
            for (size_t r = 0; r < m.rows(); ++r) {
                json row = json::array();
                for (size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c).str());
                rows.push_back(row);
            }
            ms[name] = rows;
        }
        j["matrices"] = ms;
    }
    return j.dump(2);
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

std::string instance_digest(const InstanceFile& inst) {
    return fnv1a_hex(canonical_instance_json(inst));
}

long default_prime(const InstanceFile& inst) {
    switch (inst.field.kind()) {
        case Field::Kind::Prime: return inst.field.characteristic();
        case Field::Kind::Rational: return 5;
        case Field::Kind::Cyclotomic: {
            const unsigned m = inst.field.cyclo_order();
            for (long p = 2; p <= inst.bounds.prime_max; ++p) {
                bool prime = p >= 2;
                for (long d = 2; d * d <= p; ++d)
                    if (p % d == 0) prime = false;
                if (prime && (p - 1) % m == 0) return p;
            }
            throw BadPrime("no prime p = 1 mod " + std::to_string(m) + " within bounds");
        }
    }
    return 5;
}

} // namespace mqv
