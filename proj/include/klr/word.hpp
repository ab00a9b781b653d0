#pragma once

#include "cartan.hpp"

#include <cctype>
#include <functional>
#include <string>
#include <ostream>
#include <vector>

namespace klr {

/// A word over the alphabet I; letters are node labels stored one per byte.
struct Word {
    std::string s;

    Word() = default;
    explicit Word(std::string raw) : s(std::move(raw)) {}
    Word(std::initializer_list<int> letters) {
        for (int x : letters) s.push_back(static_cast<char>(x));
    }
    static Word from_vector(const std::vector<int>& v) {
        Word w;
        for (int x : v) w.s.push_back(static_cast<char>(x));
        return w;
    }
    static Word letter(int i) { return Word{i}; }

    std::size_t size() const { return s.size(); }
    bool empty() const { return s.empty(); }
    int operator[](std::size_t k) const { return static_cast<unsigned char>(s[k]); }
    void push_back(int x) { s.push_back(static_cast<char>(x)); }

    std::vector<int> letters() const {
        std::vector<int> v;
        for (char c : s) v.push_back(static_cast<unsigned char>(c));
        return v;
    }

    Word sub(std::size_t pos, std::size_t len = std::string::npos) const { return Word(s.substr(pos, len)); }
    Word reversed() const { return Word(std::string(s.rbegin(), s.rend())); }

    friend Word operator+(const Word& a, const Word& b) { return Word(a.s + b.s); }
    friend bool operator==(const Word& a, const Word& b) { return a.s == b.s; }
    friend bool operator!=(const Word& a, const Word& b) { return a.s != b.s; }

    /// "[0,1,2]"
    std::string to_string() const {
        std::string out = "[";
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (k) out += ",";
            out += std::to_string((*this)[k]);
        }
        return out + "]";
    }
    /// "012" when every letter is a single digit, otherwise comma separated.
    std::string compact() const {
        std::string out;
        bool digits = true;
        for (std::size_t k = 0; k < s.size(); ++k) digits = digits && (*this)[k] < 10;
        if (!digits) return to_string();
        for (std::size_t k = 0; k < s.size(); ++k) out += static_cast<char>('0' + (*this)[k]);
        return out;
    }
};

struct WordHash {
    std::size_t operator()(const Word& w) const { return std::hash<std::string>()(w.s); }
};

/// Parses "2010123", "2,0,1", "[2,0,1]" or "[]".
inline Word parse_word(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '[' && c != ']') t.push_back(c);
    Word w;
    if (t.empty()) return w;
    if (t.find(',') == std::string::npos) {
        for (char c : t) {
            if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad word literal: " + text);
            w.push_back(c - '0');
        }
        return w;
    }
    std::size_t pos = 0;
    while (pos <= t.size()) {
        std::size_t comma = t.find(',', pos);
        std::string tok = t.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (tok.empty()) throw std::invalid_argument("bad word literal: " + text);
        for (char c : tok)
            if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad word literal: " + text);
        w.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return w;
}

inline void check_letters(const CartanDatum& D, const Word& w) {
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k] >= D.rank) throw std::invalid_argument("letter " + std::to_string(w[k]) + " not in the alphabet of " + D.name());
}

inline RootVector content(const CartanDatum& D, const Word& w) {
    check_letters(D, w);
    RootVector r(D.size());
    for (std::size_t k = 0; k < w.size(); ++k) r.c[static_cast<std::size_t>(w[k])] += 1;
    return r;
}

inline int height(const RootVector& v) { return v.height(); }

/// The two word orders in use: the standard one (letters compared from the right,
/// a proper right factor is larger) and its opposite (letters compared from the left
/// with the reversed letter order, a proper left factor is smaller).
enum class Order { Right, Left };

/// Negative, zero or positive as a <, =, > b.
inline int word_cmp(const Word& a, const Word& b, Order ord = Order::Right) {
    std::size_t na = a.size(), nb = b.size();
    if (ord == Order::Right) {
        for (std::size_t k = 1;; ++k) {
            bool ea = k > na, eb = k > nb;
            if (ea && eb) return 0;
            if (ea) return 1;
            if (eb) return -1;
            int x = a[na - k], y = b[nb - k];
            if (x != y) return x < y ? -1 : 1;
        }
    }
    for (std::size_t k = 0;; ++k) {
        bool ea = k >= na, eb = k >= nb;
        if (ea && eb) return 0;
        if (ea) return -1;
        if (eb) return 1;
        int x = a[k], y = b[k];
        if (x != y) return x > y ? -1 : 1;
    }
}

inline bool word_less(const Word& a, const Word& b, Order ord = Order::Right) { return word_cmp(a, b, ord) < 0; }

struct WordLess {
    Order ord = Order::Right;
    bool operator()(const Word& a, const Word& b) const { return word_cmp(a, b, ord) < 0; }
};

inline std::ostream& operator<<(std::ostream& os, const Word& w) { return os << w.to_string(); }

}  // namespace klr
