#include "accthr/bits.hpp"

#include <stdexcept>
#include <string>

namespace accthr {

BitVector::BitVector(std::size_t size, bool value)
    : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
    clear_tail();
}

void BitVector::clear_tail() {
    if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
}

std::size_t BitVector::popcount() const {
    std::size_t total = 0;
    for (const auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

bool BitVector::any() const {
    for (const auto w : words_)
        if (w != 0) return true;
    return false;
}

BitVector& BitVector::operator&=(const BitVector& o) {
    if (o.size_ != size_) throw std::invalid_argument("BitVector size mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
}

BitVector& BitVector::operator|=(const BitVector& o) {
    if (o.size_ != size_) throw std::invalid_argument("BitVector size mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
}

BitVector& BitVector::operator^=(const BitVector& o) {
    if (o.size_ != size_) throw std::invalid_argument("BitVector size mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
}

void BitVector::invert() {
    for (auto& w : words_) w = ~w;
    clear_tail();
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
    std::vector<std::uint8_t> out((size_ + 7) / 8, 0);
    for (std::size_t b = 0; b < out.size(); ++b)
        out[b] = static_cast<std::uint8_t>(words_[b / 8] >> (8 * (b % 8)));
    return out;
}

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bytes, std::size_t size) {
    if (bytes.size() != (size + 7) / 8) throw std::invalid_argument("bitmap byte count does not match size");
    BitVector v(size);
    for (std::size_t b = 0; b < bytes.size(); ++b) v.words_[b / 8] |= std::uint64_t{bytes[b]} << (8 * (b % 8));
    v.clear_tail();
    return v;
}

TruthTable::TruthTable(int n) : n_(n) {
    if (n < 0 || n > 40) throw std::invalid_argument("truth table input count out of range");
    bits_ = BitVector(std::size_t{1} << n);
}

TruthTable::TruthTable(int n, BitVector bits) : n_(n), bits_(std::move(bits)) {
    if (n < 0 || n > 40 || bits_.size() != (std::size_t{1} << n))
        throw std::invalid_argument("truth table size does not match input count");
}

std::string TruthTable::to_string() const {
    std::string s(size(), '0');
    for (std::size_t i = 0; i < s.size(); ++i)
        if (get(i)) s[i] = '1';
    return s;
}

}  // namespace accthr
