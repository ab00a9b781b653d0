#pragma once

#include "rational.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace klr {

using SparseVec = std::map<int, Rational>;

inline void axpy(SparseVec& dst, const SparseVec& src, const Rational& c) {
    if (c == 0) return;
    for (const auto& [k, v] : src) {
        auto [it, fresh] = dst.try_emplace(k, v * c);
        if (!fresh) {
            it->second += v * c;
            if (it->second == 0) dst.erase(it);
        }
    }
}

inline SparseVec operator-(const SparseVec& a, const SparseVec& b) {
    SparseVec out = a;
    axpy(out, b, Rational(-1));
    return out;
}

/// Column-major sparse square matrix: cols[k] is the image of basis vector k.
class SparseMat {
public:
    SparseMat() = default;
    explicit SparseMat(int n) : cols_(static_cast<std::size_t>(n)) {}

    int dim() const { return static_cast<int>(cols_.size()); }
    const SparseVec& col(int k) const { return cols_.at(static_cast<std::size_t>(k)); }
    SparseVec& col(int k) { return cols_.at(static_cast<std::size_t>(k)); }

    void set(int row, int colk, const Rational& v) {
        auto& c = col(colk);
        if (v == 0) c.erase(row);
        else c[row] = v;
    }
    Rational get(int row, int colk) const {
        const auto& c = col(colk);
        auto it = c.find(row);
        return it == c.end() ? Rational(0) : it->second;
    }

    SparseVec apply(const SparseVec& v) const {
        SparseVec out;
        for (const auto& [k, c] : v) axpy(out, col(k), c);
        return out;
    }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& c : cols_) n += c.size();
        return n;
    }

    friend bool operator==(const SparseMat& a, const SparseMat& b) { return a.cols_ == b.cols_; }

private:
    std::vector<SparseVec> cols_;
};

inline SparseVec unit_vec(int k) { return SparseVec{{k, Rational(1)}}; }

}  // namespace klr
