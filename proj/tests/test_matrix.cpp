#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mqv/matrix.hpp"

using namespace mqv;

namespace {

ExactMatrix from_ints(const Field& f, std::initializer_list<std::initializer_list<long>> rows) {
    ExactMatrix m(f, rows.size(), rows.begin()->size());
    size_t r = 0;
    for (const auto& row : rows) {
        size_t c = 0;
        for (long v : row) m.at(r, c++) = Scalar::from_int(f, v);
        ++r;
    }
    return m;
}

} // namespace

TEST_CASE("rank_kernel basics") {
    Field f = Field::rational();
    auto id2 = ExactMatrix::identity(f, 2);
    auto rk = rank_kernel(id2);
    CHECK(rk.rank == 2);
    CHECK(rk.kernel.cols() == 0);

    auto z = ExactMatrix::zero(f, 3, 2);
    rk = rank_kernel(z);
    CHECK(rk.rank == 0);
    CHECK(rk.kernel == ExactMatrix::identity(f, 2));

    // [[1,2],[2,4]]: rank 1, kernel spanned by (-2, 1) (hand elimination)
    auto m = from_ints(f, {{1, 2}, {2, 4}});
    rk = rank_kernel(m);
    CHECK(rk.rank == 1);
    REQUIRE(rk.kernel.cols() == 1);
    CHECK((m * rk.kernel).is_zero());
    // normalize: kernel = c * (-2, 1)
    Scalar ratio = rk.kernel.at(0, 0) / rk.kernel.at(1, 0);
    CHECK(ratio == Scalar::from_int(f, -2));
}

TEST_CASE("kernel columns always satisfy M k = 0 and are independent") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-4, 4);
    for (const Field& f : {Field::rational(), Field::prime(5), Field::cyclotomic(3)}) {
        for (int trial = 0; trial < 15; ++trial) {
            ExactMatrix m(f, 4, 5);
            for (size_t r = 0; r < 4; ++r)
                for (size_t c = 0; c < 5; ++c) m.at(r, c) = Scalar::from_int(f, d(rng));
            if (f.kind() == Field::Kind::Cyclotomic) {
                Scalar z = Scalar::cyclotomic_root(3, 1);
                for (size_t r = 0; r < 4; ++r)
                    for (size_t c = 0; c < 5; ++c)
                        if ((r + c) % 2) m.at(r, c) = m.at(r, c) * z;
            }
            auto rk = rank_kernel(m);
            CHECK(rk.rank + rk.kernel.cols() == 5);
            CHECK((m * rk.kernel).is_zero());
            if (rk.kernel.cols() > 0)
                CHECK(rank_of(rk.kernel) == rk.kernel.cols());
        }
    }
}

TEST_CASE("membership") {
    Field f = Field::rational();
    auto id = ExactMatrix::identity(f, 2);
    auto v = from_ints(f, {{3}, {-4}});
    CHECK(membership(id, v));
    auto z = ExactMatrix::zero(f, 2, 2);
    CHECK_FALSE(membership(z, v));
    auto m = from_ints(f, {{1}, {2}});
    CHECK(membership(m, from_ints(f, {{2}, {4}})));      // scalar multiple
    CHECK_FALSE(membership(m, from_ints(f, {{2}, {5}})));
    // membership(M, v) iff rank([M|v]) == rank(M), by construction
    CHECK(rank_of(m.hstack(from_ints(f, {{2}, {4}}))) == rank_of(m));
}

TEST_CASE("specialize_mod_p") {
    Field f = Field::rational();
    ExactMatrix m(f, 1, 1);
    m.at(0, 0) = Scalar::from_rat(f, Rat(1, 2));
    CHECK(specialize_mod_p(m, 5).at(0, 0).str() == "5:3");
    CHECK_THROWS_AS(specialize_mod_p(m, 2), BadPrime);
    auto ints = from_ints(f, {{7, -3}});
    auto red = specialize_mod_p(ints, 5);
    CHECK(red.at(0, 0).str() == "5:2");
    CHECK(red.at(0, 1).str() == "5:2");

    // cyclotomic: zeta_3 -> order-3 element of F_7 (7 = 1 mod 3)
    Scalar z3 = Scalar::cyclotomic_root(3, 1);
    ExactMatrix c(z3.field(), 1, 1);
    c.at(0, 0) = z3;
    Scalar img = specialize_mod_p(c, 7).at(0, 0);
    CHECK(img.pow(3) == Scalar::one(Field::prime(7)));
    CHECK(img != Scalar::one(Field::prime(7)));
    CHECK_THROWS_AS(specialize_mod_p(c, 5), BadPrime); // 5 != 1 mod 3
}

namespace {

// Test-local Laplace-expansion determinant, the oracle for prime selection.
Rat det_oracle(const ExactMatrix& m) {
    const size_t n = m.rows();
    if (n == 1) return m.at(0, 0).rat();
    Rat acc = 0;
    for (size_t j = 0; j < n; ++j) {
        ExactMatrix minor(m.field(), n - 1, n - 1);
        for (size_t r = 1; r < n; ++r) {
            size_t cc = 0;
            for (size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = m.at(r, c);
            }
        }
        Rat term = m.at(0, j).rat() * det_oracle(minor);
        if (j % 2) acc -= term;
        else acc += term;
    }
    return acc;
}

} // namespace

TEST_CASE("rank semicontinuity under reduction mod p") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> d(-9, 9);
    Field f = Field::rational();
    for (int trial = 0; trial < 12; ++trial) {
        ExactMatrix m(f, 4, 4);
        for (size_t r = 0; r < 4; ++r)
            for (size_t c = 0; c < 4; ++c) m.at(r, c) = Scalar::from_int(f, d(rng));
        size_t r0 = rank_of(m);
        for (long p : {3L, 5L, 7L}) CHECK(rank_of(specialize_mod_p(m, p)) <= r0);
        // equality holds at every prime not dividing a nonzero maximal minor;
        // for a nonsingular sample, pick the three smallest primes away from det
        Rat det = det_oracle(m);
        if (det != 0) {
            Int num = numerator(det);
            if (num < 0) num = -num;
            int found = 0;
            for (long p = 2; found < 3 && p < 1000; ++p) {
                bool prime = true;
                for (long q = 2; q * q <= p; ++q)
                    if (p % q == 0) prime = false;
                if (!prime || num % p == 0) continue;
                ++found;
                CHECK(rank_of(specialize_mod_p(m, p)) == r0);
            }
        }
    }
}

TEST_CASE("inverse, including dual fields") {
    Field f = Field::rational();
    auto m = from_ints(f, {{2, 1}, {1, 1}});
    CHECK(m * m.inverse() == ExactMatrix::identity(f, 2));
    CHECK_THROWS_AS(from_ints(f, {{1, 2}, {2, 4}}).inverse(), SingularOperator);

    Field d = f.with_dual();
    ExactMatrix md(d, 2, 2);
    for (size_t r = 0; r < 2; ++r)
        for (size_t c = 0; c < 2; ++c)
            md.at(r, c) = Scalar::with_eps(m.at(r, c), Scalar::from_int(f, 1));
    CHECK(md * md.inverse() == ExactMatrix::identity(d, 2));
}

TEST_CASE("solve_linear finds particular solutions") {
    Field f = Field::rational();
    auto m = from_ints(f, {{1, 2, 0}, {0, 0, 1}});
    auto b = from_ints(f, {{5}, {7}});
    ExactMatrix x;
    REQUIRE(solve_linear(m, b, x));
    CHECK(m * x == b);
    // inconsistent
    auto m2 = from_ints(f, {{1, 1}, {1, 1}});
    auto b2 = from_ints(f, {{0}, {1}});
    CHECK_FALSE(solve_linear(m2, b2, x));
}
