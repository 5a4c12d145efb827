#include "scsim/bitstream.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>

#include "scsim/errors.hpp"

namespace scsim {

StochasticNumber StochasticNumber::from_bits(const std::vector<bool>& bits) {
    StochasticNumber sn(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) sn.set_bit(i, true);
    return sn;
}

StochasticNumber StochasticNumber::from_string(const std::string& text) {
    StochasticNumber sn(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '1')
            sn.set_bit(i, true);
        else if (c != '0')
            throw ValidationError("bitstream text contains a character other than '0'/'1'");
    }
    return sn;
}

void StochasticNumber::push_back(bool v) {
    if ((length_ & 63) == 0) words_.push_back(0);
    if (v) words_.back() |= std::uint64_t{1} << (length_ & 63);
    ++length_;
}

std::size_t StochasticNumber::ones() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
}

std::string StochasticNumber::to_string() const {
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i)
        if (bit(i)) s[i] = '1';
    return s;
}

void StochasticNumber::write_text(std::ostream& os) const {
    os << to_string() << '\n';
}

StochasticNumber StochasticNumber::read_text(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("bitstream text read failed");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return from_string(line);
}

void StochasticNumber::write_binary(std::ostream& os) const {
    std::uint64_t len = length_;
    unsigned char header[8];
    for (int i = 0; i < 8; ++i) header[i] = static_cast<unsigned char>((len >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(header), 8);
    std::size_t nbytes = (length_ + 7) / 8;
    for (std::size_t k = 0; k < nbytes; ++k) {
        unsigned char byte =
            static_cast<unsigned char>((words_[k >> 3] >> (8 * (k & 7))) & 0xFF);
        os.write(reinterpret_cast<const char*>(&byte), 1);
    }
}

StochasticNumber StochasticNumber::read_binary(std::istream& is) {
    unsigned char header[8];
    if (!is.read(reinterpret_cast<char*>(header), 8))
        throw ValidationError("bitstream binary header read failed");
    std::uint64_t len = 0;
    for (int i = 0; i < 8; ++i) len |= std::uint64_t{header[i]} << (8 * i);
    StochasticNumber sn(static_cast<std::size_t>(len));
    std::size_t nbytes = (sn.length_ + 7) / 8;
    for (std::size_t k = 0; k < nbytes; ++k) {
        unsigned char byte;
        if (!is.read(reinterpret_cast<char*>(&byte), 1))
            throw ValidationError("bitstream binary payload truncated");
        sn.words_[k >> 3] |= std::uint64_t{byte} << (8 * (k & 7));
    }
    // Bits past the declared length must be zero for operator== to stay sane.
    if (sn.length_ & 63) sn.words_.back() &= (std::uint64_t{1} << (sn.length_ & 63)) - 1;
    return sn;
}

double estimate_probability(const StochasticNumber& sn) {
    if (sn.empty()) throw ValidationError("estimate_probability: empty stream");
    return static_cast<double>(sn.ones()) / static_cast<double>(sn.length());
}

PairCounts pair_counts(const StochasticNumber& sx, const StochasticNumber& sy) {
    if (sx.length() != sy.length())
        throw ValidationError("pair_counts: stream length mismatch");
    if (sx.empty()) throw ValidationError("pair_counts: empty streams");

    PairCounts pc;
    const auto& wx = sx.words();
    const auto& wy = sy.words();
    std::size_t n = sx.length();
    for (std::size_t w = 0; w < wx.size(); ++w) {
        std::uint64_t x = wx[w];
        std::uint64_t y = wy[w];
        std::uint64_t valid = ~std::uint64_t{0};
        if (w == wx.size() - 1 && (n & 63)) valid = (std::uint64_t{1} << (n & 63)) - 1;
        pc.n11 += std::popcount(x & y & valid);
        pc.n10 += std::popcount(x & ~y & valid);
        pc.n01 += std::popcount(~x & y & valid);
        pc.n00 += std::popcount(~x & ~y & valid);
    }
    return pc;
}

double pearson(const PairCounts& pc) {
    double a = static_cast<double>(pc.n11);
    double b = static_cast<double>(pc.n10);
    double c = static_cast<double>(pc.n01);
    double d = static_cast<double>(pc.n00);
    double denom = std::sqrt((a + b) * (a + c) * (b + d) * (c + d));
    if (denom == 0.0)
        throw UndefinedCorrelationError("pearson undefined: constant input stream");
    return (a * d - b * c) / denom;
}

double pearson(const StochasticNumber& sx, const StochasticNumber& sy) {
    return pearson(pair_counts(sx, sy));
}

double scc(const PairCounts& pc) {
    double a = static_cast<double>(pc.n11);
    double b = static_cast<double>(pc.n10);
    double c = static_cast<double>(pc.n01);
    double d = static_cast<double>(pc.n00);
    double n = a + b + c + d;
    double cross = a * d - b * c;
    double denom;
    if (cross >= 0.0) {
        denom = n * std::min(a + b, a + c) - (a + b) * (a + c);
    } else {
        denom = (a + b) * (a + c) - n * std::max(a - d, 0.0);
    }
    if (denom == 0.0)
        throw UndefinedCorrelationError("scc undefined: zero denominator");
    return cross / denom;
}

double scc(const StochasticNumber& sx, const StochasticNumber& sy) {
    return scc(pair_counts(sx, sy));
}

}  // namespace scsim
