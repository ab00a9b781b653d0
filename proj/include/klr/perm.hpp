#pragma once

#include "word.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace klr {

/// Permutation of {0,...,d-1} in one-line notation: w[a] is the image of position a.
/// Generators are 1-based: s_r exchanges positions r-1 and r.
using Perm = std::vector<int>;

inline Perm identity_perm(int d) {
    Perm w(static_cast<std::size_t>(d));
    std::iota(w.begin(), w.end(), 0);
    return w;
}

inline bool is_identity(const Perm& w) {
    for (std::size_t a = 0; a < w.size(); ++a)
        if (w[a] != static_cast<int>(a)) return false;
    return true;
}

inline int perm_length(const Perm& w) {
    int n = 0;
    for (std::size_t a = 0; a < w.size(); ++a)
        for (std::size_t b = a + 1; b < w.size(); ++b)
            if (w[a] > w[b]) ++n;
    return n;
}

inline Perm inverse(const Perm& w) {
    Perm v(w.size());
    for (std::size_t a = 0; a < w.size(); ++a) v[static_cast<std::size_t>(w[a])] = static_cast<int>(a);
    return v;
}

/// (a o b)[x] = a[b[x]]
inline Perm compose(const Perm& a, const Perm& b) {
    Perm c(b.size());
    for (std::size_t x = 0; x < b.size(); ++x) c[x] = a[static_cast<std::size_t>(b[x])];
    return c;
}

/// s_r o w: exchanges the values r-1 and r.
inline Perm left_mul(int r, Perm w) {
    for (int& x : w) {
        if (x == r - 1) x = r;
        else if (x == r) x = r - 1;
    }
    return w;
}

/// w o s_r: exchanges the entries at positions r-1 and r.
inline Perm right_mul(Perm w, int r) {
    std::swap(w[static_cast<std::size_t>(r - 1)], w[static_cast<std::size_t>(r)]);
    return w;
}

/// l(s_r w) < l(w).
inline bool left_descent(const Perm& w, int r) {
    int pa = -1, pb = -1;
    for (std::size_t a = 0; a < w.size(); ++a) {
        if (w[a] == r - 1) pa = static_cast<int>(a);
        if (w[a] == r) pb = static_cast<int>(a);
    }
    return pa > pb;
}

inline int smallest_left_descent(const Perm& w) {
    for (int r = 1; r < static_cast<int>(w.size()); ++r)
        if (left_descent(w, r)) return r;
    return 0;
}

/// s_{W[0]} s_{W[1]} ... s_{W[k-1]}.
inline Perm perm_of_word(const std::vector<int>& W, int d) {
    Perm w = identity_perm(d);
    for (auto it = W.rbegin(); it != W.rend(); ++it) w = left_mul(*it, w);
    return w;
}

/// Lexicographically smallest reduced word.
inline std::vector<int> lexmin_word(Perm w) {
    std::vector<int> W;
    while (int r = smallest_left_descent(w)) {
        W.push_back(r);
        w = left_mul(r, w);
    }
    return W;
}

/// w . i moves the letter at position a to position w[a].
inline Word act(const Perm& w, const Word& i) {
    Word out = i;
    for (std::size_t a = 0; a < w.size(); ++a) out.s[static_cast<std::size_t>(w[a])] = i.s[a];
    return out;
}

/// Minimal length representative of w (S_{d1} x S_{d-d1}): w increasing on both blocks.
inline bool is_min_coset_rep(const Perm& w, int d1) {
    for (int a = 0; a + 1 < static_cast<int>(w.size()); ++a)
        if (a + 1 != d1 && w[static_cast<std::size_t>(a)] > w[static_cast<std::size_t>(a + 1)]) return false;
    return true;
}

/// u = w x with w a minimal coset representative and x in S_{d1} x S_{d-d1}.
inline std::pair<Perm, Perm> coset_split(const Perm& u, int d1) {
    Perm w = u;
    std::sort(w.begin(), w.begin() + d1);
    std::sort(w.begin() + d1, w.end());
    return {w, compose(inverse(w), u)};
}

/// All minimal coset representatives of S_{d1+d2} / S_{d1} x S_{d2}, sorted by (length, reduced word).
inline std::vector<Perm> minimal_coset_reps(int d1, int d2) {
    if (d1 < 0 || d2 < 0) throw std::invalid_argument("minimal_coset_reps: negative block size");
    int d = d1 + d2;
    std::vector<Perm> out;
    std::vector<int> mask(static_cast<std::size_t>(d), 0);
    std::fill(mask.begin() + d1, mask.end(), 1);
    do {
        // positions 0..d1-1 go to the slots with mask 0, in increasing order
        Perm w(static_cast<std::size_t>(d));
        int a = 0, b = d1;
        for (int x = 0; x < d; ++x) {
            if (mask[static_cast<std::size_t>(x)] == 0) w[static_cast<std::size_t>(a++)] = x;
            else w[static_cast<std::size_t>(b++)] = x;
        }
        out.push_back(w);
    } while (std::next_permutation(mask.begin(), mask.end()));
    std::sort(out.begin(), out.end(), [](const Perm& a, const Perm& b) {
        int la = perm_length(a), lb = perm_length(b);
        if (la != lb) return la < lb;
        return lexmin_word(a) < lexmin_word(b);
    });
    return out;
}

}  // namespace klr
