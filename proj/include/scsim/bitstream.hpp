#ifndef SCSIM_BITSTREAM_HPP
#define SCSIM_BITSTREAM_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace scsim {

/// A finite unipolar bitstream. The encoded value is the fraction of 1-bits;
/// bit positions are significant because gates consume streams cycle by cycle.
/// Bits are packed into 64-bit words, LSB-first.
class StochasticNumber {
public:
    StochasticNumber() = default;
    explicit StochasticNumber(std::size_t length) : length_(length), words_((length + 63) / 64, 0) {}

    static StochasticNumber from_bits(const std::vector<bool>& bits);
    /// Parses a line of '0'/'1' characters.
    static StochasticNumber from_string(const std::string& text);

    std::size_t length() const { return length_; }
    bool empty() const { return length_ == 0; }

    bool bit(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set_bit(std::size_t i, bool v) {
        std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }
    void push_back(bool v);

    std::size_t ones() const;

    const std::vector<std::uint64_t>& words() const { return words_; }

    bool operator==(const StochasticNumber& other) const {
        return length_ == other.length_ && words_ == other.words_;
    }

    std::string to_string() const;

    /// Text format: one line of '0'/'1' characters (newline-terminated on write).
    void write_text(std::ostream& os) const;
    static StochasticNumber read_text(std::istream& is);

    /// Binary format: unsigned 64-bit little-endian bit count, then packed
    /// bits, LSB-first within each byte.
    void write_binary(std::ostream& os) const;
    static StochasticNumber read_binary(std::istream& is);

private:
    std::size_t length_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Positionwise joint counts of two equal-length streams. n11/n10/n01/n00 are
/// the counts of 1-1, 1-0, 0-1 and 0-0 pairs.
struct PairCounts {
    std::uint64_t n11 = 0;
    std::uint64_t n10 = 0;
    std::uint64_t n01 = 0;
    std::uint64_t n00 = 0;

    std::uint64_t total() const { return n11 + n10 + n01 + n00; }
};

/// Fraction of 1-bits. Throws ValidationError on an empty stream.
double estimate_probability(const StochasticNumber& sn);

/// Positionwise pair tally. Throws ValidationError on length mismatch.
PairCounts pair_counts(const StochasticNumber& sx, const StochasticNumber& sy);

/// Pearson correlation of two streams,
///   rho = (ad - bc) / sqrt((a+b)(a+c)(b+d)(c+d))
/// with (a, b, c, d) = (n11, n10, n01, n00). A constant stream makes the
/// denominator zero; that raises UndefinedCorrelationError rather than
/// returning 0, so degenerate inputs cannot silently pass for "uncorrelated".
double pearson(const StochasticNumber& sx, const StochasticNumber& sy);
double pearson(const PairCounts& pc);

/// Stochastic-computing correlation, normalized so +1/-1 correspond to the
/// max/min-overlap couplings:
///   ad >= bc:  (ad - bc) / (n*min(a+b, a+c) - (a+b)(a+c))
///   ad <  bc:  (ad - bc) / ((a+b)(a+c) - n*max(a-d, 0))
/// Equality ad == bc takes the first branch. Zero denominator raises
/// UndefinedCorrelationError.
double scc(const StochasticNumber& sx, const StochasticNumber& sy);
double scc(const PairCounts& pc);

}  // namespace scsim

#endif
