#include "mqv/quiver.hpp"

#include <algorithm>
#include <set>

namespace mqv {

int Quiver::vertex_index(const std::string& name) const {
    auto it = std::find(vertices.begin(), vertices.end(), name);
    if (it == vertices.end()) throw IndexMismatch("unknown vertex '" + name + "'");
    return static_cast<int>(it - vertices.begin());
}

void Quiver::validate() const {
    std::set<std::string> names;
    for (const auto& v : vertices)
        if (!names.insert(v).second) throw IndexMismatch("duplicate vertex '" + v + "'");
    names.clear();
    for (const auto& a : arrows) {
        if (!names.insert(a.name).second)
            throw IndexMismatch("duplicate arrow '" + a.name + "'");
        if (a.src < 0 || a.src >= static_cast<int>(vertices.size()) || a.tgt < 0 ||
            a.tgt >= static_cast<int>(vertices.size()))
            throw IndexMismatch("arrow '" + a.name + "' references a missing vertex");
    }
}

DoubledQuiver make_double(const Quiver& q) {
    q.validate();
    return DoubledQuiver{q};
}

TripledQuiver make_triple(const DoubledQuiver& qd, int N) {
    if (N < 2 * qd.g())
        throw NLevelTooSmall("N = " + std::to_string(N) + " < 2g = " +
                             std::to_string(2 * qd.g()));
    return TripledQuiver{qd, N};
}

void DimVector::validate() const {
    for (int d : dims)
        if (d < 0) throw IndexMismatch("negative dimension entry");
}

int DimVector::total() const {
    int t = 0;
    for (int d : dims) t += d;
    return t;
}

DimVector lift_dimension(const DimVector& alpha, int num_vertices, int N) {
    alpha.validate();
    if (static_cast<int>(alpha.dims.size()) != num_vertices)
        throw IndexMismatch("dimension vector length mismatch");
    DimVector out;
    out.dims.resize(static_cast<size_t>(num_vertices) * (N + 1));
    for (int i = 0; i < num_vertices; ++i)
        for (int n = 0; n <= N; ++n) out.dims[i * (N + 1) + n] = alpha.dims[i];
    return out;
}

Rat pairing(const StabilityVector& theta, const DimVector& beta) {
    if (theta.weights.size() != beta.dims.size())
        throw IndexMismatch("pairing index sets differ");
    Rat acc = 0;
    for (size_t i = 0; i < beta.dims.size(); ++i) acc += theta.weights[i] * beta.dims[i];
    return acc;
}

StabilityVector lift_stability(const StabilityVector& theta, const DimVector& alpha,
                               int num_vertices, int N, const Rat& T) {
    if (static_cast<int>(theta.weights.size()) != num_vertices ||
        static_cast<int>(alpha.dims.size()) != num_vertices)
        throw IndexMismatch("theta/alpha length mismatch");
    if (pairing(theta, alpha) != 0)
        throw BadPairing("sum theta_i alpha_i != 0");
    if (T <= 0) throw BadPairing("T must be positive");
    StabilityVector out;
    out.weights.assign(static_cast<size_t>(num_vertices) * (N + 1), Rat(0));
    Rat Tpow = 1;
    for (int i = 0; i < num_vertices; ++i) {
        Tpow *= T; // T^{i+1} for 1-based vertex numbering
        out.weights[i * (N + 1) + 0] = theta.weights[i] - Tpow;
        out.weights[i * (N + 1) + N] = Tpow;
    }
    return out;
}

Rat default_T(const StabilityVector& theta, const DimVector& alpha, int N) {
    Rat mx = 0;
    for (const Rat& w : theta.weights) {
        Rat a = w < 0 ? -w : w;
        if (a > mx) mx = a;
    }
    return Rat(1) + Rat(N + 1) * Rat(alpha.total()) * (Rat(1) + mx);
}

long expected_rank(const DoubledQuiver& qd, const DimVector& alpha) {
    long e = 0;
    for (int h = 0; h < qd.num_arrows(); ++h)
        e += static_cast<long>(alpha.dims[qd.src(h)]) * alpha.dims[qd.tgt(h)];
    for (int d : alpha.dims) e -= 2L * d * d;
    return e;
}

} // namespace mqv
