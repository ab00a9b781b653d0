#pragma once

#include "laurent.hpp"
#include "word.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace klr {

class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Height above which products refuse to run.
inline int& shuffle_height_cap() {
    static int cap = 14;
    return cap;
}

/// Finite sum of words with Laurent polynomial coefficients.
class ShuffleElement {
public:
    using Terms = std::unordered_map<Word, LaurentPoly, WordHash>;

    ShuffleElement() = default;
    explicit ShuffleElement(const CartanDatum& D) : D_(&D) {}
    ShuffleElement(const CartanDatum& D, const Word& w, const LaurentPoly& c = LaurentPoly(1)) : D_(&D) {
        check_letters(D, w);
        add(w, c);
    }

    const CartanDatum& datum() const {
        if (!D_) throw std::logic_error("shuffle element without datum");
        return *D_;
    }
    const CartanDatum* datum_ptr() const { return D_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add(const Word& w, const LaurentPoly& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(w, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    LaurentPoly coefficient_of(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? LaurentPoly() : it->second;
    }

    ShuffleElement& operator+=(const ShuffleElement& o) {
        adopt(o);
        for (const auto& [w, c] : o.terms_) add(w, c);
        return *this;
    }
    ShuffleElement& operator-=(const ShuffleElement& o) {
        adopt(o);
        for (const auto& [w, c] : o.terms_) add(w, -c);
        return *this;
    }
    ShuffleElement& operator*=(const LaurentPoly& c) {
        if (c.is_zero()) { terms_.clear(); return *this; }
        for (auto& [w, v] : terms_) v *= c;
        return *this;
    }
    friend ShuffleElement operator+(ShuffleElement a, const ShuffleElement& b) { return a += b; }
    friend ShuffleElement operator-(ShuffleElement a, const ShuffleElement& b) { return a -= b; }
    friend ShuffleElement operator*(ShuffleElement a, const LaurentPoly& c) { return a *= c; }
    friend ShuffleElement operator*(const LaurentPoly& c, ShuffleElement a) { return a *= c; }
    friend bool operator==(const ShuffleElement& a, const ShuffleElement& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const ShuffleElement& a, const ShuffleElement& b) { return !(a == b); }

    /// Terms sorted increasingly by the chosen word order.
    std::vector<std::pair<Word, LaurentPoly>> sorted(Order ord = Order::Right) const {
        std::vector<std::pair<Word, LaurentPoly>> v(terms_.begin(), terms_.end());
        std::sort(v.begin(), v.end(), [ord](const auto& a, const auto& b) { return word_cmp(a.first, b.first, ord) < 0; });
        return v;
    }

    /// Common content of all words; throws if the element is not homogeneous.
    RootVector weight() const {
        if (terms_.empty()) throw std::invalid_argument("zero element has no weight");
        RootVector nu = content(datum(), terms_.begin()->first);
        for (const auto& [w, c] : terms_)
            if (content(datum(), w) != nu) throw std::invalid_argument("element is not homogeneous");
        return nu;
    }
    bool homogeneous() const {
        try {
            (void)weight();
            return true;
        } catch (const std::invalid_argument&) {
            return false;
        }
    }

    int max_length() const {
        int m = 0;
        for (const auto& [w, c] : terms_) m = std::max(m, static_cast<int>(w.size()));
        return m;
    }

    std::string to_string(Order ord = Order::Right) const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [w, c] : sorted(ord)) {
            if (!first) out += " + ";
            first = false;
            if (c == LaurentPoly(1)) out += w.to_string();
            else if (c.size() == 1) out += c.to_string() + "*" + w.to_string();
            else out += "(" + c.to_string() + ")*" + w.to_string();
        }
        return out;
    }

private:
    void adopt(const ShuffleElement& o) {
        if (!D_) D_ = o.D_;
        else if (o.D_ && o.D_ != D_ && o.D_->serialize() != D_->serialize())
            throw std::invalid_argument("mismatched datum");
    }

    const CartanDatum* D_ = nullptr;
    Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const ShuffleElement& x) { return os << x.to_string(); }

namespace detail {

using IntPoly = std::map<int, long long>;
using MonoShuffle = std::unordered_map<Word, IntPoly, WordHash>;

/// Shuffle of two words by the right-peeling recursion
///   (x[i]) * (y[j]) = (x * y[j])[i] + q^{-(|x|+a_i, a_j)} ((x[i]) * y)[j],
/// with sign = -1 giving the variant with q replaced by q^{-1}.
inline MonoShuffle shuffle_words(const CartanDatum& D, const Word& u, const Word& v, int sign = 1) {
    std::size_t a = u.size(), b = v.size();
    // prefix contents of u paired against each letter
    std::vector<std::vector<int>> upair(a + 1, std::vector<int>(D.size(), 0));
    for (std::size_t i = 1; i <= a; ++i) {
        upair[i] = upair[i - 1];
        for (std::size_t k = 0; k < D.size(); ++k) upair[i][k] += D.form(u[i - 1], static_cast<int>(k));
    }
    // row-by-row table over (i, j): cell holds u[0,i) * v[0,j)
    std::vector<MonoShuffle> prev(b + 1), cur(b + 1);
    for (std::size_t i = 0; i <= a; ++i) {
        for (std::size_t j = 0; j <= b; ++j) {
            MonoShuffle cell;
            if (i == 0 && j == 0) {
                cell[Word()][0] = 1;
            } else {
                if (i > 0) {
                    for (const auto& [w, p] : prev[j]) {
                        Word nw = w;
                        nw.push_back(u[i - 1]);
                        auto& dst = cell[nw];
                        for (const auto& [e, c] : p) dst[e] += c;
                    }
                }
                if (j > 0) {
                    int shift = -sign * upair[i][static_cast<std::size_t>(v[j - 1])];
                    for (const auto& [w, p] : cur[j - 1]) {
                        Word nw = w;
                        nw.push_back(v[j - 1]);
                        auto& dst = cell[nw];
                        for (const auto& [e, c] : p) dst[e + shift] += c;
                    }
                }
            }
            cur[j] = std::move(cell);
        }
        std::swap(prev, cur);
    }
    return std::move(prev[b]);
}

inline ShuffleElement shuffle_impl(const ShuffleElement& x, const ShuffleElement& y, int sign) {
    const CartanDatum* Dp = x.datum_ptr() ? x.datum_ptr() : y.datum_ptr();
    if (!Dp) return ShuffleElement();
    if (x.datum_ptr() && y.datum_ptr() && x.datum_ptr() != y.datum_ptr() &&
        x.datum().serialize() != y.datum().serialize())
        throw std::invalid_argument("shuffle: mismatched datum");
    const CartanDatum& D = *Dp;
    if (x.max_length() + y.max_length() > shuffle_height_cap())
        throw ResourceError("shuffle: total height " + std::to_string(x.max_length() + y.max_length()) +
                            " exceeds cap " + std::to_string(shuffle_height_cap()));
    ShuffleElement out(D);
    for (const auto& [u, cu] : x.terms()) {
        for (const auto& [v, cv] : y.terms()) {
            LaurentPoly cuv = cu * cv;
            auto mono = shuffle_words(D, u, v, sign);
            for (const auto& [w, p] : mono) {
                LaurentPoly coef;
                for (const auto& [e, c] : p) coef.add_term(e, Rational(static_cast<long>(c)));
                out.add(w, cuv * coef);
            }
        }
    }
    return out;
}

}  // namespace detail

inline ShuffleElement shuffle(const ShuffleElement& x, const ShuffleElement& y) { return detail::shuffle_impl(x, y, 1); }

/// Shuffle with q replaced by q^{-1} in the structure constants.
inline ShuffleElement shuffle_bar(const ShuffleElement& x, const ShuffleElement& y) {
    return detail::shuffle_impl(x, y, -1);
}

inline ShuffleElement shuffle_power(const ShuffleElement& x, int n) {
    if (n < 0) throw std::invalid_argument("negative shuffle power");
    ShuffleElement r(x.datum(), Word());
    for (int k = 0; k < n; ++k) r = shuffle(r, x);
    return r;
}

inline ShuffleElement concat(const ShuffleElement& x, const ShuffleElement& y) {
    const CartanDatum& D = x.datum_ptr() ? x.datum() : y.datum();
    ShuffleElement out(D);
    for (const auto& [u, cu] : x.terms())
        for (const auto& [v, cv] : y.terms()) out.add(u + v, cu * cv);
    return out;
}

/// [x, y]_q = xy - q^{(|x|,|y|)} yx under concatenation.
inline ShuffleElement qbracket(const ShuffleElement& x, const ShuffleElement& y) {
    if (!x.homogeneous() || !y.homogeneous()) throw std::invalid_argument("qbracket: inhomogeneous input");
    const CartanDatum& D = x.datum();
    int e = D.form(x.weight(), y.weight());
    return concat(x, y) - LaurentPoly::q(e) * concat(y, x);
}

inline ShuffleElement tau_elem(const ShuffleElement& x) {
    ShuffleElement out(x.datum());
    for (const auto& [w, c] : x.terms()) out.add(w.reversed(), c);
    return out;
}

inline ShuffleElement bar_elem(const ShuffleElement& x) {
    if (x.is_zero()) return x;
    const CartanDatum& D = x.datum();
    int n = D.N(x.weight());
    ShuffleElement out(D);
    for (const auto& [w, c] : x.terms()) out.add(w.reversed(), c.bar().shifted(n));
    return out;
}

inline ShuffleElement sigma_elem(const ShuffleElement& x) {
    if (x.is_zero()) return x;
    const CartanDatum& D = x.datum();
    int n = D.N(x.weight());
    ShuffleElement out(D);
    for (const auto& [w, c] : x.terms()) out.add(w, c.bar().shifted(n));
    return out;
}

inline std::pair<Word, LaurentPoly> min_word(const ShuffleElement& x, Order ord = Order::Right) {
    if (x.is_zero()) throw std::invalid_argument("min_word of zero element");
    auto it = std::min_element(x.terms().begin(), x.terms().end(),
                               [ord](const auto& a, const auto& b) { return word_cmp(a.first, b.first, ord) < 0; });
    return {it->first, it->second};
}

/// Largest word, used under the opposite order.
inline std::pair<Word, LaurentPoly> max_word(const ShuffleElement& x, Order ord = Order::Right) {
    if (x.is_zero()) throw std::invalid_argument("max_word of zero element");
    auto it = std::max_element(x.terms().begin(), x.terms().end(),
                               [ord](const auto& a, const auto& b) { return word_cmp(a.first, b.first, ord) < 0; });
    return {it->first, it->second};
}

inline LaurentPoly coefficient_of(const ShuffleElement& x, const Word& w) { return x.coefficient_of(w); }

}  // namespace klr
