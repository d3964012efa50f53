#pragma once

#include <map>
#include <string>
#include <vector>

#include "mqv/scalar.hpp"

namespace mqv {

/// Base quiver (I, Omega) with the fixed arrow ordering a_1,...,a_g that the
/// relation product uses.  Vertices and arrows are referred to by index; the
/// declared vertex order matters (it drives the T^i stability weights).
struct Quiver {
    std::vector<std::string> vertices;
    struct Arrow {
        std::string name;
        int src = 0;
        int tgt = 0;
    };
    std::vector<Arrow> arrows; // in relation order a_1,...,a_g

    int vertex_index(const std::string& name) const;
    void validate() const;
};

/// Double: each base arrow a gets a reverse partner a*.  Arrows of the double
/// are indexed 0..2g-1 with h < g the base arrows and h+g the star of h.
struct DoubledQuiver {
    Quiver base;
    int num_arrows() const { return 2 * static_cast<int>(base.arrows.size()); }
    int num_vertices() const { return static_cast<int>(base.vertices.size()); }
    int g() const { return static_cast<int>(base.arrows.size()); }

    int star(int h) const { return h < g() ? h + g() : h - g(); }
    int sign(int h) const { return h < g() ? +1 : -1; } // epsilon(a)
    int src(int h) const {
        return h < g() ? base.arrows[h].src : base.arrows[h - g()].tgt;
    }
    int tgt(int h) const {
        return h < g() ? base.arrows[h].tgt : base.arrows[h - g()].src;
    }
    std::string arrow_name(int h) const {
        return h < g() ? base.arrows[h].name : base.arrows[h - g()].name + "*";
    }
};

DoubledQuiver make_double(const Quiver& q);

/// Graded tripled quiver: vertices I x [0,N]; arrows (h,n) for h in H,
/// n in [0,N-1], plus level-shift arrows t_{i,n}.
struct TripledQuiver {
    DoubledQuiver dbl;
    int N = 0;

    int num_levels() const { return N + 1; }
    int vertex_count() const { return dbl.num_vertices() * (N + 1); }
    int arrow_count() const { return N * (dbl.num_arrows() + dbl.num_vertices()); }
};

TripledQuiver make_triple(const DoubledQuiver& qd, int N);

/// Dimension vector, indexed per vertex (or per (vertex, level) when lifted).
struct DimVector {
    std::vector<int> dims;
    void validate() const;
    int total() const;
};

/// Per-vertex rational stability weights with pairing <theta, alpha> = 0.
struct StabilityVector {
    std::vector<Rat> weights;
};

/// alpha^gtr: the constant-in-level lift.  Index order is vertex-major:
/// entry (i,n) sits at i*(N+1)+n.
DimVector lift_dimension(const DimVector& alpha, int num_vertices, int N);

/// theta^gtr = sum_i T^i [delta_{i,N} - delta_{i,0}] + sum_i theta_i delta_{i,0}.
/// Same (i,n) index order as lift_dimension.  Throws BadPairing unless
/// <theta, alpha> = 0.
StabilityVector lift_stability(const StabilityVector& theta, const DimVector& alpha,
                               int num_vertices, int N, const Rat& T);

/// Conservative default for "T >> 0": 1 + (N+1) * sum(alpha) * (1 + max|theta|).
Rat default_T(const StabilityVector& theta, const DimVector& alpha, int N);

Rat pairing(const StabilityVector& theta, const DimVector& beta);

/// sum_{h in H} alpha_{s(h)} alpha_{t(h)} - 2 sum_i alpha_i^2: the rank of the
/// three-term complex, which depends only on the quiver and alpha.
long expected_rank(const DoubledQuiver& qd, const DimVector& alpha);

} // namespace mqv
