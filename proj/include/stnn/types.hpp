#pragma once

#include <cstdint>
#include <vector>

namespace stnn {

/// Set of substructure indices present in a drug: the sparse form of its
/// binary fingerprint vector. Indices are strictly increasing and unique.
struct Fingerprint {
    std::vector<std::uint32_t> bits;

    bool empty() const { return bits.empty(); }
    std::size_t size() const { return bits.size(); }

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

/// Normalize raw indices into a Fingerprint: sorts, drops duplicates and
/// validates every index against the universe size n. The number of dropped
/// duplicates is added to *duplicates_dropped when supplied.
/// Throws IndexError on an index >= n.
Fingerprint make_fingerprint(std::vector<std::uint32_t> indices, std::size_t n,
                             std::size_t* duplicates_dropped = nullptr);

/// Canonical positive triple: drug pair (p < q) and interaction type k.
struct Triple {
    std::uint32_t p = 0;
    std::uint32_t q = 0;
    std::uint32_t k = 0;

    friend bool operator==(const Triple&, const Triple&) = default;
    friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// Training/evaluation example: triple plus a 0/1 label.
struct LabeledTriple {
    std::uint32_t p = 0;
    std::uint32_t q = 0;
    std::uint32_t k = 0;
    std::uint8_t label = 0;

    friend bool operator==(const LabeledTriple&, const LabeledTriple&) = default;
};

/// Pack a canonical triple into one 64-bit key (21 bits per component).
inline std::uint64_t triple_key(std::uint32_t p, std::uint32_t q,
                                std::uint32_t k) {
    return (static_cast<std::uint64_t>(p) << 42) |
           (static_cast<std::uint64_t>(q) << 21) | k;
}

inline Triple triple_from_key(std::uint64_t key) {
    return Triple{static_cast<std::uint32_t>(key >> 42),
                  static_cast<std::uint32_t>((key >> 21) & 0x1FFFFF),
                  static_cast<std::uint32_t>(key & 0x1FFFFF)};
}

/// Component bound implied by the 21-bit key packing.
inline constexpr std::uint32_t kMaxIndex = (1u << 21) - 1;

}  // namespace stnn
