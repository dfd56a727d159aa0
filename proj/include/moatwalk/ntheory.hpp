#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace moatwalk::ntheory {

/// Exact primality for any 64-bit n (deterministic Miller-Rabin witness set).
bool is_prime(uint64_t n);

/// Legendre three-square test: true iff n is a sum of three integer squares,
/// i.e. n is not of the form 4^x(8y+7). three_square_admissible(0) is true.
bool three_square_admissible(uint64_t n);

/// Floor square root, exact for all 64-bit inputs.
uint64_t isqrt(uint64_t n);

/// Odd-only bitset sieve with exact membership up to `limit`.
/// Immutable after construction; safe to share across threads.
class PrimeTable {
public:
    static constexpr uint64_t kDefaultCap = uint64_t(1) << 40;

    /// Segmented sieve. threads == 0 picks a thread count automatically
    /// (MOATWALK_THREADS, then hardware concurrency); the result is identical
    /// for every thread count. Throws CapacityError unless 2 <= limit <= cap.
    static PrimeTable build(uint64_t limit, unsigned threads = 0,
                            uint64_t cap = kDefaultCap);

    uint64_t limit() const { return limit_; }
    uint64_t count() const { return count_; }  // pi(limit)

    /// Exact membership; requires n <= limit.
    bool contains(uint64_t n) const;

    /// Table lookup when n <= limit, deterministic Miller-Rabin beyond.
    bool is_prime(uint64_t n) const;

    void save(std::ostream& out) const;
    static PrimeTable load(std::istream& in);

    /// bit i of words()[i/64] is set iff 2i+1 is prime (2 handled separately).
    const std::vector<uint64_t>& words() const { return words_; }

private:
    PrimeTable() = default;
    uint64_t limit_ = 0;
    uint64_t count_ = 0;
    std::vector<uint64_t> words_;
};

/// Counts of odd primes <= limit per residue class mod 8.
struct ResidueCensus {
    uint64_t limit = 0;
    std::array<uint64_t, 4> counts{};  // residues 1, 3, 5, 7 in order

    uint64_t count_for(unsigned residue) const { return counts[residue >> 1]; }
    uint64_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
};

/// Exact census over odd primes <= limit; requires limit >= 3.
ResidueCensus residue_census(uint64_t limit);
ResidueCensus residue_census(const PrimeTable& table);

}  // namespace moatwalk::ntheory
