#include "moatwalk/ntheory.hpp"

#include <sstream>

#include "doctest.h"
#include "moatwalk/errors.hpp"
#include "oracles.hpp"

using namespace moatwalk;
using namespace moatwalk::ntheory;

TEST_CASE("build_sieve first primes") {
    auto t = PrimeTable::build(10);
    std::vector<uint64_t> got;
    for (uint64_t n = 0; n <= 10; ++n)
        if (t.contains(n)) got.push_back(n);
    CHECK(got == std::vector<uint64_t>{2, 3, 5, 7});
    CHECK(t.count() == 4);
}

TEST_CASE("build_sieve rejects out-of-range limits") {
    CHECK_THROWS_AS(PrimeTable::build(1), CapacityError);
    CHECK_THROWS_AS(PrimeTable::build(0), CapacityError);
    CHECK_THROWS_AS(PrimeTable::build(100, 0, 50), CapacityError);
    CHECK(PrimeTable::build(2).count() == 1);
}

TEST_CASE("sieve matches plain sieve oracle up to 10^5") {
    auto t = PrimeTable::build(100000);
    auto mark = oracle::simple_sieve(100000);
    for (uint64_t n = 0; n <= 100000; ++n) CHECK(t.contains(n) == bool(mark[n]));
}

TEST_CASE("pi(10^6) equals 78498, recounted by oracle and trial division") {
    auto t = PrimeTable::build(1000000);
    CHECK(t.count() == 78498);

    auto mark = oracle::simple_sieve(1000000);
    uint64_t cnt = 0;
    for (char m : mark) cnt += m;
    CHECK(t.count() == cnt);

    // Trial-division spot check on a sampled range.
    for (uint64_t n = 999000; n <= 1000000; ++n)
        CHECK(t.contains(n) == oracle::trial_division_prime(n));
}

TEST_CASE("sieve construction is independent of thread count") {
    auto a = PrimeTable::build(300000, 1);
    auto b = PrimeTable::build(300000, 4);
    CHECK(a.words() == b.words());
    CHECK(a.count() == b.count());
}

TEST_CASE("is_prime basics") {
    CHECK(is_prime(29));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(0));
    CHECK(is_prime(2));
    CHECK_FALSE(is_prime(uint64_t(3) * 1000000007));  // 3e9+21 composite
    CHECK(is_prime(3000000007ULL) == oracle::trial_division_prime(3000000007ULL));
}

TEST_CASE("is_prime agrees with trial division exhaustively to 2*10^5") {
    for (uint64_t n = 0; n <= 200000; ++n)
        CHECK(is_prime(n) == oracle::trial_division_prime(n));
}

TEST_CASE("is_prime rejects strong pseudoprimes to small bases") {
    CHECK_FALSE(is_prime(3215031751ULL));  // spsp to bases 2,3,5,7
    CHECK_FALSE(is_prime(3825123056546413051ULL));  // spsp to 2..23
    CHECK(is_prime(18446744073709551557ULL));  // largest 64-bit prime
}

TEST_CASE("PrimeTable::is_prime defers beyond the limit") {
    auto t = PrimeTable::build(1000);
    for (uint64_t n = 0; n <= 1000; ++n) CHECK(t.is_prime(n) == t.contains(n));
    CHECK(t.is_prime(1009));
    CHECK_FALSE(t.is_prime(1001));
}

TEST_CASE("three_square_admissible pinned values") {
    CHECK_FALSE(three_square_admissible(7));    // 4^0(8*0+7)
    CHECK_FALSE(three_square_admissible(28));   // 4*7
    CHECK(three_square_admissible(0));
    CHECK(three_square_admissible(3));
    CHECK_FALSE(three_square_admissible(112));  // 4^2*7
}

TEST_CASE("three_square_admissible equals brute force to 10^4") {
    auto rep = oracle::three_square_table(10000);
    for (uint64_t n = 0; n <= 10000; ++n)
        CHECK(three_square_admissible(n) == bool(rep[n]));
}

TEST_CASE("odd primes are admissible exactly when not 7 mod 8") {
    auto t = PrimeTable::build(100000);
    for (uint64_t p = 3; p <= 100000; p += 2) {
        if (!t.contains(p)) continue;
        CHECK(three_square_admissible(p) == (p % 8 != 7));
    }
}

TEST_CASE("residue_census limit 50") {
    auto c = residue_census(50);
    CHECK(c.count_for(1) == 2);  // 17, 41
    CHECK(c.count_for(3) == 4);  // 3, 11, 19, 43
    CHECK(c.count_for(5) == 4);  // 5, 13, 29, 37
    CHECK(c.count_for(7) == 4);  // 7, 23, 31, 47
    CHECK(c.total() == 14);
}

TEST_CASE("residue_census edge cases") {
    auto c = residue_census(3);
    CHECK(c.count_for(3) == 1);
    CHECK(c.count_for(1) == 0);
    CHECK(c.count_for(5) == 0);
    CHECK(c.count_for(7) == 0);
    CHECK_THROWS(residue_census(2));
}

TEST_CASE("census sums to pi(limit)-1 and grows monotonically") {
    uint64_t prev[4] = {0, 0, 0, 0};
    for (uint64_t limit : {50ull, 500ull, 5000ull, 50000ull}) {
        auto t = PrimeTable::build(limit);
        auto c = residue_census(t);
        CHECK(c.total() == t.count() - 1);
        for (int i = 0; i < 4; ++i) {
            CHECK(c.counts[i] >= prev[i]);
            prev[i] = c.counts[i];
        }
        if (limit >= 50)
            for (int i = 0; i < 4; ++i) CHECK(c.counts[i] > 0);
    }
}

TEST_CASE("sieve cache round trip") {
    auto t = PrimeTable::build(12345);
    std::stringstream buf;
    t.save(buf);
    auto r = PrimeTable::load(buf);
    CHECK(r.limit() == t.limit());
    CHECK(r.count() == t.count());
    CHECK(r.words() == t.words());

    SUBCASE("bad magic rejected") {
        std::stringstream bad("XXXX rest");
        CHECK_THROWS_AS(PrimeTable::load(bad), CacheError);
    }
    SUBCASE("truncated file rejected") {
        std::string bytes = buf.str();
        std::stringstream cut(bytes.substr(0, bytes.size() / 2));
        CHECK_THROWS_AS(PrimeTable::load(cut), CacheError);
    }
}
