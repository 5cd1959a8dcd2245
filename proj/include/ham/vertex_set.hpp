#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace ham {

// Fixed-universe bitset over vertices 0..n-1 with O(1) membership and
// maintained cardinality.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(int n) : n_(n), words_((n + 63) / 64, 0) {}

    static VertexSet full(int n) {
        VertexSet s(n);
        for (int v = 0; v < n; ++v) s.insert(v);
        return s;
    }

    int universe() const { return n_; }
    int size() const { return count_; }
    bool empty() const { return count_ == 0; }

    bool contains(int v) const {
        if (v < 0 || v >= n_) return false;
        return (words_[v >> 6] >> (v & 63)) & 1u;
    }

    void insert(int v) {
        assert(v >= 0 && v < n_);
        uint64_t& w = words_[v >> 6];
        uint64_t bit = uint64_t(1) << (v & 63);
        if (!(w & bit)) {
            w |= bit;
            ++count_;
        }
    }

    void erase(int v) {
        assert(v >= 0 && v < n_);
        uint64_t& w = words_[v >> 6];
        uint64_t bit = uint64_t(1) << (v & 63);
        if (w & bit) {
            w &= ~bit;
            --count_;
        }
    }

    void clear() {
        std::fill(words_.begin(), words_.end(), 0);
        count_ = 0;
    }

    VertexSet& operator|=(const VertexSet& o) {
        assert(n_ == o.n_);
        count_ = 0;
        for (size_t i = 0; i < words_.size(); ++i) {
            words_[i] |= o.words_[i];
            count_ += __builtin_popcountll(words_[i]);
        }
        return *this;
    }

    VertexSet& operator&=(const VertexSet& o) {
        assert(n_ == o.n_);
        count_ = 0;
        for (size_t i = 0; i < words_.size(); ++i) {
            words_[i] &= o.words_[i];
            count_ += __builtin_popcountll(words_[i]);
        }
        return *this;
    }

    // this \ o
    VertexSet& operator-=(const VertexSet& o) {
        assert(n_ == o.n_);
        count_ = 0;
        for (size_t i = 0; i < words_.size(); ++i) {
            words_[i] &= ~o.words_[i];
            count_ += __builtin_popcountll(words_[i]);
        }
        return *this;
    }

    friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
    friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
    friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

    bool operator==(const VertexSet& o) const {
        return n_ == o.n_ && words_ == o.words_;
    }

    int intersect_count(const VertexSet& o) const {
        assert(n_ == o.n_);
        int c = 0;
        for (size_t i = 0; i < words_.size(); ++i)
            c += __builtin_popcountll(words_[i] & o.words_[i]);
        return c;
    }

    bool disjoint(const VertexSet& o) const {
        assert(n_ == o.n_);
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return false;
        return true;
    }

    bool subset_of(const VertexSet& o) const {
        assert(n_ == o.n_);
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        out.reserve(count_);
        for (size_t i = 0; i < words_.size(); ++i) {
            uint64_t w = words_[i];
            while (w) {
                int b = __builtin_ctzll(w);
                out.push_back(int(i * 64 + b));
                w &= w - 1;
            }
        }
        return out;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (size_t i = 0; i < words_.size(); ++i) {
            uint64_t w = words_[i];
            while (w) {
                int b = __builtin_ctzll(w);
                f(int(i * 64 + b));
                w &= w - 1;
            }
        }
    }

    template <typename It>
    static VertexSet of(int n, It begin, It end) {
        VertexSet s(n);
        for (It it = begin; it != end; ++it) s.insert(*it);
        return s;
    }

    static VertexSet of(int n, std::initializer_list<int> vs) {
        return of(n, vs.begin(), vs.end());
    }

    static VertexSet of(int n, const std::vector<int>& vs) {
        return of(n, vs.begin(), vs.end());
    }

private:
    int n_ = 0;
    std::vector<uint64_t> words_;
    int count_ = 0;
};

}  // namespace ham
