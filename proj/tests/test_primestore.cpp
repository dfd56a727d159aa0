#include "moatwalk/primestore.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "moatwalk/errors.hpp"
#include "moatwalk/lattice.hpp"
#include "oracles.hpp"

using namespace moatwalk;
using namespace moatwalk::lattice;
using namespace moatwalk::store;

namespace {

std::vector<LatticePoint3> all_points(const PrimeStore& s) {
    std::vector<LatticePoint3> out;
    StoreScan(s).for_each([&](const LatticePoint3& p) { out.push_back(p); });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<LatticePoint3> oracle_points(uint64_t norm_bound) {
    std::vector<LatticePoint3> out;
    for (auto [a, b, c] : oracle::interior_primes_octant(norm_bound))
        out.push_back({int32_t(a), int32_t(b), int32_t(c)});
    return out;
}

}  // namespace

TEST_CASE("A=0 store is empty") {
    auto s = PrimeStore::build(BallSpec{0});
    CHECK(s.count() == 0);
    CHECK(s.query_ball({1, 1, 1}, 10).empty());
}

TEST_CASE("A=1 store matches the brute-force enumeration") {
    auto s = PrimeStore::build(BallSpec{1});
    CHECK(s.contains({1, 1, 1}));
    CHECK(all_points(s) == oracle_points(100));
}

TEST_CASE("A=2 store count matches an independent enumeration") {
    auto s = PrimeStore::build(BallSpec{2});
    auto expect = oracle_points(10000);
    CHECK(s.count() == expect.size());
    CHECK(all_points(s) == expect);
}

TEST_CASE("every stored point classifies as Interior3D") {
    auto s = PrimeStore::build(BallSpec{2});
    StoreScan(s).for_each([&](const LatticePoint3& p) {
        auto cls = classify3(p);
        CHECK(cls.tag == PrimeTag::Interior3D);
        CHECK(cls.norm <= s.spec().radius_sq());
    });
}

TEST_CASE("capacity errors") {
    CHECK_THROWS_AS(PrimeStore::build(BallSpec{7}), CapacityError);
    CHECK_THROWS_AS(PrimeStore::build(BallSpec{4}), CapacityError);
}

TEST_CASE("construction is independent of thread count") {
    auto a = PrimeStore::build(BallSpec{2}, 1);
    auto b = PrimeStore::build(BallSpec{2}, 4);
    CHECK(a.packed() == b.packed());

    std::ostringstream fa, fb;
    a.save(fa);
    b.save(fb);
    CHECK(fa.str() == fb.str());
}

TEST_CASE("query_ball pinned cases") {
    auto s = PrimeStore::build(BallSpec{2});

    auto zero = s.query_ball({1, 1, 1}, 0);
    REQUIRE(zero.size() == 1);
    CHECK(zero[0] == LatticePoint3{1, 1, 1});

    auto everything = s.query_ball({1, 1, 1}, 2.0 * 100);
    CHECK(everything.size() == s.count());
}

TEST_CASE("query_ball matches a linear scan oracle") {
    auto s = PrimeStore::build(BallSpec{2});
    auto pts = all_points(s);
    oracle::Lcg rng(123);
    for (int trial = 0; trial < 10; ++trial) {
        LatticePoint3 center{int32_t(rng.next_below(60)) + 1,
                             int32_t(rng.next_below(60)) + 1,
                             int32_t(rng.next_below(60)) + 1};
        double r = double(rng.next_below(30));
        auto got = s.query_ball(center, r);

        std::vector<std::pair<uint64_t, LatticePoint3>> expect;
        for (const auto& p : pts) {
            int64_t dx = p.a - center.a, dy = p.b - center.b, dz = p.c - center.c;
            uint64_t d2 = uint64_t(dx * dx + dy * dy + dz * dz);
            if (double(d2) <= r * r) expect.emplace_back(d2, p);
        }
        std::sort(expect.begin(), expect.end(),
                  [](const auto& l, const auto& r2) {
                      return l.first != r2.first ? l.first < r2.first
                                                 : l.second < r2.second;
                  });
        REQUIRE(got.size() == expect.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == expect[i].second);
    }
}

TEST_CASE("query_halfspace_ball respects plane and forward filters") {
    auto s = PrimeStore::build(BallSpec{2});
    auto plane = GuidePlane::q0();
    Vec3i fwd = forward_direction(plane);

    auto got = s.query_halfspace_ball({1, 1, 1}, 12, plane, fwd);
    CHECK(!got.empty());
    auto full = s.query_ball({1, 1, 1}, 12);
    std::set<LatticePoint3> full_set(full.begin(), full.end());
    for (const auto& p : got) {
        CHECK(p.b <= p.a);  // at or below the plane x=y
        CHECK(dot(fwd, Vec3i{p.a - 1, p.b - 1, p.c - 1}) > 0);
        CHECK(full_set.count(p) == 1);
    }

    auto empty = PrimeStore::from_points(BallSpec{2}, {});
    CHECK(empty.query_halfspace_ball({1, 1, 1}, 12, plane, fwd).empty());
}

TEST_CASE("from_points validates classification") {
    CHECK_NOTHROW(PrimeStore::from_points(BallSpec{1}, {{1, 1, 1}, {3, 1, 1}}));
    CHECK_THROWS_AS(PrimeStore::from_points(BallSpec{1}, {{2, 2, 2}}), DomainError);
    CHECK_THROWS_AS(PrimeStore::from_points(BallSpec{1}, {{0, 1, 1}}), DomainError);
    CHECK_THROWS_AS(PrimeStore::from_points(BallSpec{1}, {{99, 1, 1}}), DomainError);
    CHECK_THROWS_AS(
        PrimeStore::from_points(BallSpec{1}, {{1, 1, 1}, {1, 1, 1}}), DomainError);
}

TEST_CASE("cache round trip and rejection") {
    auto s = PrimeStore::build(BallSpec{1});
    std::stringstream buf;
    s.save(buf);

    auto r = PrimeStore::load(buf, /*verify=*/true);
    CHECK(r.spec() == s.spec());
    CHECK(r.count() == s.count());
    CHECK(all_points(r) == all_points(s));

    SUBCASE("wrong magic") {
        std::stringstream bad("NOPE");
        CHECK_THROWS_AS(PrimeStore::load(bad), CacheError);
    }
    SUBCASE("corrupted point fails verification") {
        std::string bytes = buf.str();
        // First point begins after the 24-byte header; make it (2,2,2).
        bytes[24] = 2;
        bytes[28] = 2;
        bytes[32] = 2;
        std::stringstream cut(bytes);
        CHECK_THROWS_AS(PrimeStore::load(cut, /*verify=*/true), CacheError);
    }
    SUBCASE("truncation detected") {
        std::string bytes = buf.str();
        std::stringstream cut(bytes.substr(0, bytes.size() - 5));
        CHECK_THROWS_AS(PrimeStore::load(cut), CacheError);
    }
}
