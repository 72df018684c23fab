#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pvc {

using Vertex = std::uint32_t;

/// Fixed-length packed bitset. Bits past size() in the last word are always zero.
class Bitset {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    Bitset() = default;
    explicit Bitset(std::size_t size, bool value = false)
        : size_(size), words_(word_count(size), value ? ~Word{0} : Word{0}) {
        trim();
    }

    /// Parses a string of '0'/'1' characters; character i becomes bit i.
    static Bitset from_string(std::string_view bits) {
        Bitset out(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] == '1') {
                out.set(i);
            } else if (bits[i] != '0') {
                throw std::invalid_argument("bitstring contains a character other than 0/1");
            }
        }
        return out;
    }

    static constexpr std::size_t word_count(std::size_t bits) noexcept {
        return (bits + kWordBits - 1) / kWordBits;
    }

    std::size_t size() const noexcept { return size_; }
    std::size_t num_words() const noexcept { return words_.size(); }
    const std::vector<Word>& words() const noexcept { return words_; }

    bool test(std::size_t i) const noexcept {
        return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
    }
    void set(std::size_t i) noexcept { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
    void reset(std::size_t i) noexcept { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }
    void flip(std::size_t i) noexcept { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }
    void assign(std::size_t i, bool value) noexcept { value ? set(i) : reset(i); }

    void clear() noexcept {
        for (auto& w : words_) w = 0;
    }

    std::size_t count() const noexcept {
        std::size_t total = 0;
        for (Word w : words_) total += static_cast<std::size_t>(std::popcount(w));
        return total;
    }

    bool none() const noexcept {
        for (Word w : words_)
            if (w != 0) return false;
        return true;
    }

    /// popcount(*this AND other).
    std::size_t count_and(const Bitset& other) const {
        check_same_size(other);
        std::size_t total = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            total += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
        return total;
    }

    /// popcount(*this AND NOT other).
    std::size_t count_and_not(const Bitset& other) const {
        check_same_size(other);
        std::size_t total = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            total += static_cast<std::size_t>(std::popcount(words_[i] & ~other.words_[i]));
        return total;
    }

    bool is_subset_of(const Bitset& other) const {
        check_same_size(other);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if ((words_[i] & ~other.words_[i]) != 0) return false;
        return true;
    }

    Bitset& operator&=(const Bitset& other) {
        check_same_size(other);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& other) {
        check_same_size(other);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
        return *this;
    }
    Bitset& subtract(const Bitset& other) {
        check_same_size(other);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
        return *this;
    }

    Bitset operator~() const {
        Bitset out(*this);
        for (auto& w : out.words_) w = ~w;
        out.trim();
        return out;
    }
    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }

    /// Index of the first set bit at or after `from`, or size() if none.
    std::size_t find_next(std::size_t from) const noexcept {
        if (from >= size_) return size_;
        std::size_t wi = from / kWordBits;
        Word w = words_[wi] & (~Word{0} << (from % kWordBits));
        while (true) {
            if (w != 0) return wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w));
            if (++wi >= words_.size()) return size_;
            w = words_[wi];
        }
    }
    std::size_t find_first() const noexcept { return find_next(0); }

    /// Set bit positions in increasing order.
    std::vector<Vertex> indices() const {
        std::vector<Vertex> out;
        out.reserve(count());
        for (std::size_t i = find_first(); i < size_; i = find_next(i + 1))
            out.push_back(static_cast<Vertex>(i));
        return out;
    }

    std::string to_string() const {
        std::string out(size_, '0');
        for (std::size_t i = 0; i < size_; ++i)
            if (test(i)) out[i] = '1';
        return out;
    }

    friend bool operator==(const Bitset&, const Bitset&) = default;

private:
    void trim() noexcept {
        if (size_ % kWordBits != 0 && !words_.empty())
            words_.back() &= (Word{1} << (size_ % kWordBits)) - 1;
    }
    void check_same_size(const Bitset& other) const {
        if (other.size_ != size_) throw std::invalid_argument("bitset size mismatch");
    }

    std::size_t size_ = 0;
    std::vector<Word> words_;
};

}  // namespace pvc
