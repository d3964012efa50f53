#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mqv/quiver.hpp"

using namespace mqv;

namespace {

Quiver one_loop() {
    return Quiver{{"v"}, {{"a", 0, 0}}};
}

Quiver two_vertex_arrow() {
    return Quiver{{"1", "2"}, {{"a", 0, 1}}};
}

Quiver two_loops() {
    return Quiver{{"v"}, {{"a", 0, 0}, {"b", 0, 0}}};
}

} // namespace

TEST_CASE("double") {
    DoubledQuiver d = make_double(one_loop());
    CHECK(d.num_arrows() == 2);
    CHECK(d.src(0) == 0);
    CHECK(d.tgt(1) == 0);
    CHECK(d.sign(0) == 1);
    CHECK(d.sign(1) == -1);
    CHECK(d.star(0) == 1);
    CHECK(d.star(1) == 0);
    CHECK(d.arrow_name(1) == "a*");

    DoubledQuiver d2 = make_double(two_vertex_arrow());
    CHECK(d2.src(1) == 1); // a*: 2 -> 1
    CHECK(d2.tgt(1) == 0);

    DoubledQuiver d3 = make_double(two_loops());
    CHECK(d3.num_arrows() == 4);
    for (int h = 0; h < 4; ++h) {
        CHECK(d3.star(d3.star(h)) == h);
        CHECK(d3.star(h) != h); // fixed-point free
        CHECK(d3.src(d3.star(h)) == d3.tgt(h));
    }
}

TEST_CASE("triple") {
    DoubledQuiver d = make_double(one_loop());
    TripledQuiver t = make_triple(d, 2);
    CHECK(t.vertex_count() == 3);
    CHECK(t.arrow_count() == 2 * (2 + 1)); // N(|H| + |I|)
    CHECK_THROWS_AS(make_triple(d, 1), NLevelTooSmall);

    DoubledQuiver d2 = make_double(two_vertex_arrow());
    TripledQuiver t2 = make_triple(d2, 2);
    CHECK(t2.vertex_count() == 6);
    CHECK(t2.arrow_count() == 8); // 4 (h,n) arrows + 4 t-arrows
}

TEST_CASE("lift_dimension") {
    DimVector a{{2}};
    DimVector lifted = lift_dimension(a, 1, 2);
    CHECK(lifted.dims == std::vector<int>{2, 2, 2});
    DimVector b{{1, 1}};
    CHECK(lift_dimension(b, 2, 2).dims == std::vector<int>(6, 1));
    DimVector z{{0}};
    CHECK(lift_dimension(z, 1, 2).dims == std::vector<int>{0, 0, 0});
}

TEST_CASE("lift_stability") {
    // theta = 0, one vertex, N = 2, T = 7: level 0 gets -7, level 2 gets +7
    StabilityVector theta{{Rat(0)}};
    DimVector alpha{{2}};
    StabilityVector lifted = lift_stability(theta, alpha, 1, 2, Rat(7));
    CHECK(lifted.weights == std::vector<Rat>{Rat(-7), Rat(0), Rat(7)});

    // theta = (1,-1), alpha = (1,1), N = 2, T = 7:
    // vertex 1: (-6, 0, 7); vertex 2: (-50, 0, 49)
    StabilityVector t2{{Rat(1), Rat(-1)}};
    DimVector a2{{1, 1}};
    StabilityVector l2 = lift_stability(t2, a2, 2, 2, Rat(7));
    CHECK(l2.weights ==
          std::vector<Rat>{Rat(-6), Rat(0), Rat(7), Rat(-50), Rat(0), Rat(49)});

    StabilityVector bad{{Rat(1), Rat(1)}};
    CHECK_THROWS_AS(lift_stability(bad, a2, 2, 2, Rat(7)), BadPairing);
}

TEST_CASE("lifted stability pairs to zero with lifted dimension") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> d(1, 3);
    for (int trial = 0; trial < 20; ++trial) {
        int nv = 1 + static_cast<int>(rng() % 3);
        DimVector alpha;
        for (int i = 0; i < nv; ++i) alpha.dims.push_back(d(rng));
        // random theta with <theta, alpha> = 0: theta_i = c_i, last fixes the sum
        StabilityVector theta;
        Rat acc = 0;
        for (int i = 0; i + 1 < nv; ++i) {
            Rat w(static_cast<int>(rng() % 7) - 3);
            theta.weights.push_back(w);
            acc += w * alpha.dims[i];
        }
        theta.weights.push_back(-acc / alpha.dims[nv - 1]);
        int N = 2 + static_cast<int>(rng() % 3);
        Rat T = default_T(theta, alpha, N);
        StabilityVector lifted = lift_stability(theta, alpha, nv, N, T);
        DimVector lifted_a = lift_dimension(alpha, nv, N);
        CHECK(pairing(lifted, lifted_a) == 0);
    }
}

TEST_CASE("expected_rank") {
    CHECK(expected_rank(make_double(one_loop()), DimVector{{2}}) == 0);   // 8 - 8
    CHECK(expected_rank(make_double(two_loops()), DimVector{{2}}) == 8);  // 16 - 8
    CHECK(expected_rank(make_double(two_vertex_arrow()), DimVector{{1, 1}}) == -2);
}

TEST_CASE("pairing") {
    StabilityVector theta{{Rat(1), Rat(-1)}};
    CHECK(pairing(theta, DimVector{{1, 0}}) == 1);
    StabilityVector zero{{Rat(0), Rat(0)}};
    CHECK(pairing(zero, DimVector{{3, 4}}) == 0);
    // theta^gtr from lift_stability(0, alpha=2, N=2, T=7) against a level-0 line
    StabilityVector lifted =
        lift_stability(StabilityVector{{Rat(0)}}, DimVector{{2}}, 1, 2, Rat(7));
    CHECK(pairing(lifted, DimVector{{1, 0, 0}}) == -7);
    CHECK_THROWS_AS(pairing(theta, DimVector{{1}}), IndexMismatch);
}
