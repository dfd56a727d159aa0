#include "moatwalk/lattice.hpp"

#include <set>

#include "doctest.h"
#include "moatwalk/geometry.hpp"
#include "oracles.hpp"

using namespace moatwalk;
using namespace moatwalk::lattice;

TEST_CASE("classify_gaussian pinned values") {
    CHECK(classify_gaussian({1, 1}));    // norm 2
    CHECK(classify_gaussian({3, 0}));    // 3 ≡ 3 (mod 4)
    CHECK(classify_gaussian({0, -3}));
    CHECK_FALSE(classify_gaussian({2, 0}));  // 2 = -i(1+i)^2
    CHECK_FALSE(classify_gaussian({0, 0}));
    CHECK_FALSE(classify_gaussian({1, 0}));
    CHECK(classify_gaussian({-2, 1}));   // norm 5
    CHECK_FALSE(classify_gaussian({5, 0}));  // 5 ≡ 1 (mod 4) splits
}

TEST_CASE("classify_gaussian agrees with divisor-search oracle") {
    for (int64_t a = -12; a <= 12; ++a)
        for (int64_t b = -12; b <= 12; ++b)
            CHECK(classify_gaussian({a, b}) ==
                  oracle::gaussian_prime_by_divisor_search(a, b));
}

TEST_CASE("classify3 pinned values") {
    auto interior = classify3({4, 3, 2});
    CHECK(interior.tag == PrimeTag::Interior3D);
    CHECK(interior.norm == 29);
    CHECK(interior.detail == 29);

    auto smallest = classify3({1, 1, 1});
    CHECK(smallest.tag == PrimeTag::Interior3D);
    CHECK(smallest.norm == 3);

    CHECK(classify3({2, 2, 2}).tag == PrimeTag::Composite);  // norm 12

    auto axis = classify3({7, 0, 0});
    CHECK(axis.tag == PrimeTag::Axis);
    CHECK(axis.detail == 7);
    CHECK(classify3({0, 0, -7}).tag == PrimeTag::Axis);
    // Axis points need a prime ≡ 7 (mod 8); 3 and 5 fail that clause.
    CHECK(classify3({3, 0, 0}).tag == PrimeTag::Composite);
    CHECK(classify3({0, 5, 0}).tag == PrimeTag::Composite);

    auto boundary = classify3({2, 3, 0});
    CHECK(boundary.tag == PrimeTag::BoundaryGaussian);
    CHECK(boundary.zero_axis == 2);
    CHECK(boundary.detail == 13);
    CHECK(classify3({0, 1, 1}).tag == PrimeTag::BoundaryGaussian);
    CHECK(classify3({0, 2, 2}).tag == PrimeTag::Composite);  // norm 8
    CHECK(classify3({0, 0, 0}).tag == PrimeTag::Composite);
}

TEST_CASE("classify3 matches the literal definition oracle") {
    for (int64_t a = -14; a <= 14; ++a)
        for (int64_t b = -14; b <= 14; ++b)
            for (int64_t c = -14; c <= 14; ++c) {
                auto got = classify3({int32_t(a), int32_t(b), int32_t(c)}).tag;
                auto want = oracle::def2_literal(a, b, c);
                bool same =
                    (got == PrimeTag::Interior3D && want == oracle::Def2Tag::Interior) ||
                    (got == PrimeTag::BoundaryGaussian && want == oracle::Def2Tag::Boundary) ||
                    (got == PrimeTag::Axis && want == oracle::Def2Tag::Axis) ||
                    (got == PrimeTag::Composite && want == oracle::Def2Tag::Composite);
                CHECK(same);
            }
}

TEST_CASE("canonicalize pinned values") {
    auto t = canonicalize({2, 4, 3});
    CHECK(t == CanonicalTriple{4, 3, 2, 6});
    CHECK(canonicalize({1, 1, 1}) == CanonicalTriple{1, 1, 1, 1});
    CHECK(canonicalize({0, 3, 3}) == CanonicalTriple{3, 3, 0, 3});
    CHECK(canonicalize({-2, 4, -3}) == CanonicalTriple{4, 3, 2, 6});
}

TEST_CASE("canonicalize is idempotent and invariant under signed permutations") {
    const int32_t perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                 {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    oracle::Lcg rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        int32_t v[3] = {int32_t(rng.next_below(21)) - 10,
                        int32_t(rng.next_below(21)) - 10,
                        int32_t(rng.next_below(21)) - 10};
        auto base = canonicalize({v[0], v[1], v[2]});
        CHECK(canonicalize({base.x, base.y, base.z}) == base);
        for (auto& perm : perms)
            for (int signs = 0; signs < 8; ++signs) {
                int32_t w[3];
                for (int i = 0; i < 3; ++i)
                    w[i] = (signs >> i & 1) ? -v[perm[i]] : v[perm[i]];
                CHECK(canonicalize({w[0], w[1], w[2]}) == base);
            }
    }
}

TEST_CASE("ordered_representations pinned values") {
    auto r3 = ordered_representations(3);
    REQUIRE(r3.size() == 1);
    CHECK(r3[0] == CanonicalTriple{1, 1, 1, 1});

    CHECK(ordered_representations(7).empty());

    auto r29 = ordered_representations(29);
    REQUIRE(r29.size() == 2);
    CHECK(r29[0] == CanonicalTriple{4, 3, 2, 6});
    CHECK(r29[1] == CanonicalTriple{5, 2, 0, 6});

    CHECK_THROWS(ordered_representations(10000000001ULL));
}

TEST_CASE("multiplicities sum to the full ordered enumeration count") {
    for (uint64_t n = 0; n <= 2000; ++n) {
        auto reps = ordered_representations(n);
        uint64_t total = 0;
        std::set<CanonicalTriple> seen;
        for (const auto& r : reps) {
            total += uint64_t(r.multiplicity);
            CHECK(r.x >= r.y);
            CHECK(r.y >= r.z);
            CHECK(r.z >= 0);
            CHECK(seen.insert(r).second);
            CHECK(uint64_t(int64_t(r.x) * r.x + int64_t(r.y) * r.y +
                           int64_t(r.z) * r.z) == n);
        }
        CHECK(total == oracle::ordered_triples(n).size());
    }
}

TEST_CASE("primes not 7 mod 8 always have representations") {
    auto mark = oracle::simple_sieve(10000);
    for (uint64_t p = 2; p <= 10000; ++p) {
        if (!mark[p]) continue;
        auto reps = ordered_representations(p);
        CHECK(reps.empty() == (p % 8 == 7));
    }
}

TEST_CASE("interior classification implies an all-nonzero representation") {
    oracle::Lcg rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        LatticePoint3 p{int32_t(rng.next_below(40)) + 1,
                        int32_t(rng.next_below(40)) + 1,
                        int32_t(rng.next_below(40)) + 1};
        if (classify3(p).tag != PrimeTag::Interior3D) continue;
        auto canon = canonicalize(p);
        bool found = false;
        for (const auto& r : ordered_representations(p.norm()))
            if (r == canon) found = true;
        CHECK(found);
        CHECK(canon.z > 0);
    }
}

TEST_CASE("plane geometry helpers") {
    auto q0 = GuidePlane::q0();
    CHECK(q0.side({3, 3, 1}) == 0);
    CHECK(q0.side({4, 2, 1}) < 0);   // a > b is the searched side
    CHECK(q0.side({2, 4, 1}) > 0);

    CHECK(forward_direction(q0) == Vec3i{1, 1, 0});
    CHECK(forward_direction(GuidePlane{{0, 0, 1}, 1}) == Vec3i{1, 0, 0});
    CHECK(forward_direction(GuidePlane{{0, 0, -5}, 1}) == Vec3i{1, 0, 0});

    CHECK(primitive(Vec3i{4, -6, 8}) == Vec3i{2, -3, 4});
    CHECK(primitive(Vec3i{0, 0, 0}) == Vec3i{0, 0, 0});

    CHECK(orient_normal(Vec3i{1, 6, -11}) == Vec3i{-1, -6, 11});
    CHECK(orient_normal(Vec3i{-1, 1, 0}) == Vec3i{-1, 1, 0});
    CHECK(orient_normal(Vec3i{0, 1, -1}) == Vec3i{0, -1, 1});
    CHECK(orient_normal(Vec3i{0, 0, 3}) == Vec3i{0, 0, -3});
}
