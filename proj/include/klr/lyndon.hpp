#pragma once

#include "word.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace klr {

/// Lyndon on the right (Order::Right): larger than every proper left factor.
/// Lyndon on the left (Order::Left): smaller than every proper right factor.
inline bool is_lyndon(const Word& w, Order ord = Order::Right) {
    if (w.empty()) throw std::invalid_argument("is_lyndon: empty word");
    for (std::size_t k = 1; k < w.size(); ++k) {
        if (ord == Order::Right) {
            if (word_cmp(w.sub(0, k), w, ord) >= 0) return false;
        } else {
            if (word_cmp(w, w.sub(k), ord) >= 0) return false;
        }
    }
    return true;
}

/// Right order: l = l1 l2 with l2 the longest proper right factor that is Lyndon.
/// Left order: l = l1 l2 with l1 the longest proper left factor that is Lyndon.
inline std::pair<Word, Word> std_factorization(const Word& l, Order ord = Order::Right) {
    if (l.size() < 2) throw std::invalid_argument("std_factorization: need a Lyndon word of length >= 2");
    if (!is_lyndon(l, ord)) throw std::invalid_argument("std_factorization: not Lyndon: " + l.to_string());
    if (ord == Order::Right) {
        for (std::size_t k = 1; k < l.size(); ++k) {
            Word r = l.sub(k);
            if (is_lyndon(r, ord)) return {l.sub(0, k), r};
        }
    } else {
        for (std::size_t k = l.size() - 1; k >= 1; --k) {
            Word p = l.sub(0, k);
            if (is_lyndon(p, ord)) return {p, l.sub(k)};
        }
    }
    throw std::logic_error("std_factorization: no Lyndon factor found");
}

namespace detail {

// Duval's algorithm for the order of Order::Left (letters compared left to right
// with the reversed letter order, a proper prefix is smaller).
inline std::vector<Word> duval_left(const Word& w) {
    auto lt = [](int a, int b) { return a > b; };
    std::vector<Word> out;
    std::size_t n = w.size(), i = 0;
    while (i < n) {
        std::size_t j = i + 1, k = i;
        while (j < n && !lt(w[j], w[k])) {
            if (lt(w[k], w[j])) k = i;
            else ++k;
            ++j;
        }
        while (i <= k) {
            out.push_back(w.sub(i, j - k));
            i += j - k;
        }
    }
    return out;
}

}  // namespace detail

/// Unique factorization into Lyndon words l1 >= l2 >= ... >= lk.
inline std::vector<Word> canonical_factorization(const Word& w, Order ord = Order::Right) {
    if (w.empty()) throw std::invalid_argument("canonical_factorization: empty word");
    if (ord == Order::Left) return detail::duval_left(w);
    auto f = detail::duval_left(w.reversed());
    std::vector<Word> out;
    for (auto it = f.rbegin(); it != f.rend(); ++it) out.push_back(it->reversed());
    return out;
}

/// Bijection between positive roots and good Lyndon words.
struct LyndonTable {
    const CartanDatum* datum = nullptr;
    Order order = Order::Right;
    std::map<RootVector, Word> map;
    std::unordered_map<Word, RootVector, WordHash> inverse;
    std::vector<RootVector> sorted_roots;  // increasing in the induced root order

    const Word& word(const RootVector& b) const {
        auto it = map.find(b);
        if (it == map.end()) throw std::invalid_argument("not a positive root: " + b.to_string());
        return it->second;
    }
    bool contains(const Word& w) const { return inverse.count(w) > 0; }
    const RootVector& root(const Word& w) const {
        auto it = inverse.find(w);
        if (it == inverse.end()) throw std::invalid_argument("not a good Lyndon word: " + w.to_string());
        return it->second;
    }
    /// Negative when beta1 comes before beta2 in the induced order.
    int root_cmp(const RootVector& a, const RootVector& b) const { return word_cmp(word(a), word(b), order); }

    /// Words grouped by height, each group sorted by the word order.
    std::map<int, std::vector<Word>> by_height() const {
        std::map<int, std::vector<Word>> g;
        for (const auto& [b, w] : map) g[b.height()].push_back(w);
        for (auto& [h, v] : g)
            std::sort(v.begin(), v.end(), [this](const Word& a, const Word& b) { return word_cmp(a, b, order) < 0; });
        return g;
    }
};

/// Height induction: l(beta) is the minimum (Right) or maximum (Left) of the products
/// l(beta1) l(beta2) over decompositions with l(beta1) < l(beta2).
inline LyndonTable good_lyndon_table(const CartanDatum& D, Order ord = Order::Right) {
    LyndonTable T;
    T.datum = &D;
    T.order = ord;
    std::vector<RootVector> roots = D.positive_roots;  // sorted by height
    for (const auto& beta : roots) {
        if (beta.height() == 1) {
            int i = static_cast<int>(std::find(beta.c.begin(), beta.c.end(), 1) - beta.c.begin());
            T.map[beta] = Word::letter(i);
            continue;
        }
        std::optional<Word> best;
        for (const auto& b1 : roots) {
            if (b1.height() >= beta.height()) break;
            RootVector b2 = beta - b1;
            if (!b2.nonnegative() || b2.is_zero()) continue;
            auto it2 = T.map.find(b2);
            if (it2 == T.map.end()) continue;
            const Word& w1 = T.map.at(b1);
            const Word& w2 = it2->second;
            if (word_cmp(w1, w2, ord) >= 0) continue;
            Word cand = w1 + w2;
            if (!best) best = cand;
            else if (ord == Order::Right ? word_cmp(cand, *best, ord) < 0 : word_cmp(cand, *best, ord) > 0) best = cand;
        }
        if (!best) throw std::logic_error("no decomposition for root " + beta.to_string());
        T.map[beta] = *best;
    }
    for (const auto& [b, w] : T.map) T.inverse.emplace(w, b);
    if (T.inverse.size() != T.map.size()) throw std::logic_error("good Lyndon words are not distinct");
    T.sorted_roots = roots;
    std::sort(T.sorted_roots.begin(), T.sorted_roots.end(),
              [&T](const RootVector& a, const RootVector& b) { return T.root_cmp(a, b) < 0; });
    return T;
}

inline LyndonTable opposite_table(const CartanDatum& D) { return good_lyndon_table(D, Order::Left); }

/// Good-word membership: every canonical factor is a good Lyndon word.
inline bool is_good(const LyndonTable& T, const Word& w) {
    if (w.empty()) return true;
    for (const auto& f : canonical_factorization(w, T.order))
        if (!T.contains(f)) return false;
    return true;
}

/// All non-increasing products of good Lyndon words of total content nu, sorted.
inline std::vector<Word> good_words(const LyndonTable& T, const RootVector& nu) {
    std::vector<RootVector> desc(T.sorted_roots.rbegin(), T.sorted_roots.rend());
    std::vector<Word> out;
    std::vector<std::size_t> pick;
    RootVector rest = nu;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (rest.is_zero()) {
            Word w;
            for (std::size_t k : pick) w = w + T.map.at(desc[k]);
            out.push_back(w);
            return;
        }
        for (std::size_t k = from; k < desc.size(); ++k) {
            RootVector r = rest - desc[k];
            if (!r.nonnegative()) continue;
            RootVector saved = rest;
            rest = r;
            pick.push_back(k);
            rec(k);
            pick.pop_back();
            rest = saved;
        }
    };
    if (!nu.nonnegative()) throw std::invalid_argument("good_words: weight must be in Q+");
    rec(0);
    std::sort(out.begin(), out.end(), [&T](const Word& a, const Word& b) { return word_cmp(a, b, T.order) < 0; });
    return out;
}

}  // namespace klr
