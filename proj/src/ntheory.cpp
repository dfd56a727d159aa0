#include "moatwalk/ntheory.hpp"

#include <bit>
#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "moatwalk/errors.hpp"
#include "io_util.hpp"
#include "parallel.hpp"

namespace moatwalk::ntheory {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return uint64_t((unsigned __int128)a * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Witness set exact for all n < 2^64.
constexpr uint64_t kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool miller_rabin(uint64_t n) {
    int s = std::countr_zero(n - 1);
    uint64_t d = (n - 1) >> s;
    for (uint64_t a : kWitnesses) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// Bits at index i ≡ 0,1,2,3 (mod 4) hold odd numbers ≡ 1,3,5,7 (mod 8).
constexpr uint64_t kResidueMask1 = 0x1111111111111111ULL;

constexpr std::size_t kSieveBlockWords = std::size_t(1) << 12;

}  // namespace

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                       23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    if (n < 41 * 41) return true;
    return miller_rabin(n);
}

bool three_square_admissible(uint64_t n) {
    if (n == 0) return true;  // 0 = 0+0+0
    while ((n & 3) == 0) n >>= 2;
    return (n & 7) != 7;
}

uint64_t isqrt(uint64_t n) {
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n && (r + 1) != 0) ++r;
    return r;
}

PrimeTable PrimeTable::build(uint64_t limit, unsigned threads, uint64_t cap) {
    if (limit < 2 || limit > cap)
        throw CapacityError("sieve limit must be in [2, " + std::to_string(cap) +
                            "], got " + std::to_string(limit));

    PrimeTable t;
    t.limit_ = limit;
    uint64_t nbits = (limit + 1) / 2;  // bit i <-> 2i+1
    std::size_t nwords = std::size_t((nbits + 63) / 64);
    t.words_.assign(nwords, ~uint64_t(0));

    // Base primes up to sqrt(limit) via a plain sieve.
    uint64_t root = isqrt(limit);
    std::vector<uint64_t> base;
    {
        std::vector<char> mark(root + 1, 1);
        for (uint64_t i = 3; i * i <= root; i += 2)
            if (mark[i])
                for (uint64_t j = i * i; j <= root; j += 2 * i) mark[j] = 0;
        for (uint64_t i = 3; i <= root; i += 2)
            if (mark[i]) base.push_back(i);
    }

    std::size_t nblocks = (nwords + kSieveBlockWords - 1) / kSieveBlockWords;
    detail::parallel_blocks(nblocks, threads, [&](std::size_t blk) {
        std::size_t wlo = blk * kSieveBlockWords;
        std::size_t whi = std::min(wlo + kSieveBlockWords, nwords);
        uint64_t bit_lo = uint64_t(wlo) * 64;
        uint64_t bit_hi = uint64_t(whi) * 64;  // exclusive
        uint64_t n_lo = 2 * bit_lo + 1;
        for (uint64_t p : base) {
            if (p * p >= 2 * bit_hi + 1) break;
            // First odd multiple of p that is >= max(p*p, n_lo).
            uint64_t start = p * p;
            if (start < n_lo) {
                uint64_t q = (n_lo + p - 1) / p;
                if ((q & 1) == 0) ++q;
                start = q * p;
            }
            for (uint64_t i = start >> 1; i < bit_hi; i += p)
                t.words_[i >> 6] &= ~(uint64_t(1) << (i & 63));
        }
    });

    t.words_[0] &= ~uint64_t(1);  // 1 is not prime
    // Clear bits past the last odd number <= limit.
    if (nbits % 64 != 0) t.words_.back() &= (uint64_t(1) << (nbits % 64)) - 1;

    uint64_t cnt = 1;  // the prime 2
    for (uint64_t w : t.words_) cnt += std::popcount(w);
    t.count_ = cnt;
    return t;
}

bool PrimeTable::contains(uint64_t n) const {
    if (n < 2) return false;
    if ((n & 1) == 0) return n == 2;
    uint64_t i = n >> 1;
    return (words_[i >> 6] >> (i & 63)) & 1;
}

bool PrimeTable::is_prime(uint64_t n) const {
    if (n <= limit_) return contains(n);
    return ntheory::is_prime(n);
}

void PrimeTable::save(std::ostream& out) const {
    out.write("MWSV", 4);
    detail::write_u32(out, 1);
    detail::write_u64(out, limit_);
    for (uint64_t w : words_) detail::write_u64(out, w);
    if (!out) throw CacheError("sieve cache write failed");
}

PrimeTable PrimeTable::load(std::istream& in) {
    detail::expect_magic(in, "MWSV");
    uint32_t version = detail::read_u32(in);
    if (version != 1)
        throw CacheError("unsupported sieve cache version " +
                         std::to_string(version));
    PrimeTable t;
    t.limit_ = detail::read_u64(in);
    if (t.limit_ < 2) throw CacheError("sieve cache limit out of range");
    uint64_t nbits = (t.limit_ + 1) / 2;
    std::size_t nwords = std::size_t((nbits + 63) / 64);
    t.words_.resize(nwords);
    for (std::size_t i = 0; i < nwords; ++i) t.words_[i] = detail::read_u64(in);
    uint64_t cnt = 1;
    for (uint64_t w : t.words_) cnt += std::popcount(w);
    t.count_ = cnt;
    return t;
}

ResidueCensus residue_census(const PrimeTable& table) {
    ResidueCensus c;
    c.limit = table.limit();
    for (uint64_t w : table.words()) {
        c.counts[0] += std::popcount(w & kResidueMask1);
        c.counts[1] += std::popcount(w & (kResidueMask1 << 1));
        c.counts[2] += std::popcount(w & (kResidueMask1 << 2));
        c.counts[3] += std::popcount(w & (kResidueMask1 << 3));
    }
    return c;
}

ResidueCensus residue_census(uint64_t limit) {
    if (limit < 3) throw std::invalid_argument("residue_census requires limit >= 3");
    return residue_census(PrimeTable::build(limit));
}

}  // namespace moatwalk::ntheory
