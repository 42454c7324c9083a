#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace nusim {

// Fixed-width bit vector over a universe {0, ..., size-1}. All operations
// are exact; binary operations require both operands to share the same
// universe size.
class Bitset {
public:
    Bitset() = default;

    explicit Bitset(std::size_t size) : size_(size), words_(word_count(size), 0) {}

    static Bitset none(std::size_t size) { return Bitset(size); }

    static Bitset all(std::size_t size)
    {
        Bitset b(size);
        for (auto& w : b.words_) w = ~std::uint64_t{0};
        b.trim();
        return b;
    }

    std::size_t size() const { return size_; }

    bool test(std::size_t i) const
    {
        assert(i < size_);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i)
    {
        assert(i < size_);
        words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }

    void reset(std::size_t i)
    {
        assert(i < size_);
        words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    std::size_t count() const
    {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool any() const
    {
        for (auto w : words_)
            if (w != 0) return true;
        return false;
    }

    bool is_subset_of(const Bitset& other) const
    {
        assert(size_ == other.size_);
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~other.words_[k]) return false;
        return true;
    }

    bool intersects(const Bitset& other) const
    {
        assert(size_ == other.size_);
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & other.words_[k]) return true;
        return false;
    }

    Bitset complement() const
    {
        Bitset r(size_);
        for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] = ~words_[k];
        r.trim();
        return r;
    }

    Bitset& operator&=(const Bitset& other)
    {
        assert(size_ == other.size_);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
        return *this;
    }

    Bitset& operator|=(const Bitset& other)
    {
        assert(size_ == other.size_);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
        return *this;
    }

    friend Bitset operator&(Bitset lhs, const Bitset& rhs) { return lhs &= rhs; }
    friend Bitset operator|(Bitset lhs, const Bitset& rhs) { return lhs |= rhs; }

    friend bool operator==(const Bitset&, const Bitset&) = default;

    // Elements in ascending order.
    std::vector<std::size_t> elements() const
    {
        std::vector<std::size_t> out;
        out.reserve(count());
        for (std::size_t k = 0; k < words_.size(); ++k) {
            std::uint64_t w = words_[k];
            while (w != 0) {
                const auto bit = static_cast<std::size_t>(std::countr_zero(w));
                out.push_back((k << 6) + bit);
                w &= w - 1;
            }
        }
        return out;
    }

private:
    static std::size_t word_count(std::size_t size) { return (size + 63) / 64; }

    // Bits above size_ stay zero so word-wise comparisons are exact.
    void trim()
    {
        if (size_ % 64 != 0 && !words_.empty())
            words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace nusim
