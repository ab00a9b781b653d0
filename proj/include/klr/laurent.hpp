#pragma once

#include "rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace klr {

class ArithmeticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Laurent polynomial in q with exact rational coefficients.
/// Stored sparsely, sorted by exponent, never holding a zero coefficient.
class LaurentPoly {
public:
    using Terms = std::map<int, Rational>;

    LaurentPoly() = default;
    LaurentPoly(long c) { if (c != 0) terms_[0] = c; }  // NOLINT(implicit)
    LaurentPoly(const Rational& c) { if (c != 0) terms_[0] = c; }  // NOLINT(implicit)

    static LaurentPoly monomial(int exp, const Rational& c = 1) {
        LaurentPoly p;
        if (c != 0) p.terms_[exp] = c;
        return p;
    }
    static LaurentPoly q(int exp = 1) { return monomial(exp, 1); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Rational coeff(int exp) const {
        auto it = terms_.find(exp);
        return it == terms_.end() ? Rational(0) : it->second;
    }
    int min_exp() const { return terms_.empty() ? 0 : terms_.begin()->first; }
    int max_exp() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

    bool is_monomial() const { return terms_.size() == 1; }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }

    void add_term(int exp, const Rational& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.try_emplace(exp, c);
        if (fresh) {
            it->second.canonicalize();
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
    LaurentPoly& operator*=(const Rational& c) {
        if (c == 0) { terms_.clear(); return *this; }
        for (auto& [e, v] : terms_) v *= c;
        return *this;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator-(LaurentPoly a) { return a *= Rational(-1); }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        for (const auto& [e1, c1] : a.terms_)
            for (const auto& [e2, c2] : b.terms_) r.add_term(e1 + e2, c1 * c2);
        return r;
    }
    friend LaurentPoly operator*(LaurentPoly a, const Rational& c) { return a *= c; }
    friend LaurentPoly operator*(const Rational& c, LaurentPoly a) { return a *= c; }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    /// Multiply by q^n.
    LaurentPoly shifted(int n) const {
        LaurentPoly r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e + n, c);
        return r;
    }

    LaurentPoly pow(unsigned n) const {
        LaurentPoly r(1), b = *this;
        while (n) {
            if (n & 1u) r *= b;
            n >>= 1u;
            if (n) b *= b;
        }
        return r;
    }

    /// q -> q^{-1}
    LaurentPoly bar() const {
        LaurentPoly r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(-e, c);
        return r;
    }

    /// q -> q^k
    LaurentPoly substitute_power(int k) const {
        LaurentPoly r;
        for (const auto& [e, c] : terms_) r.add_term(e * k, c);
        return r;
    }

    Rational at_one() const {
        Rational s = 0;
        for (const auto& [e, c] : terms_) s += c;
        return s;
    }

    Rational at(const Rational& x) const {
        if (x == 0) throw std::invalid_argument("LaurentPoly::at: zero");
        Rational s = 0;
        for (const auto& [e, c] : terms_) {
            mpz_class n = x.get_num(), d = x.get_den();
            mpz_class pn, pd;
            mpz_pow_ui(pn.get_mpz_t(), (e >= 0 ? n : d).get_mpz_t(), static_cast<unsigned long>(std::abs(e)));
            mpz_pow_ui(pd.get_mpz_t(), (e >= 0 ? d : n).get_mpz_t(), static_cast<unsigned long>(std::abs(e)));
            Rational t(pn, pd);
            t.canonicalize();
            s += c * t;
        }
        return s;
    }

    bool nonnegative_integral() const {
        for (const auto& [e, c] : terms_)
            if (c < 0 || !is_integer(c)) return false;
        return true;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            Rational c = it->second;
            int e = it->first;
            if (first) {
                if (c < 0) { os << "-"; c = -c; }
            } else {
                os << (c < 0 ? " - " : " + ");
                if (c < 0) c = -c;
            }
            first = false;
            if (e == 0) { os << c.get_str(); continue; }
            if (c != 1) os << c.get_str() << "*";
            os << "q";
            if (e != 1) os << "^" << e;
        }
        return os.str();
    }

    /// [[exp, num, den], ...] ascending in exponent.
    std::vector<std::vector<std::string>> structured() const {
        std::vector<std::vector<std::string>> out;
        for (const auto& [e, c] : terms_)
            out.push_back({std::to_string(e), c.get_num().get_str(), c.get_den().get_str()});
        return out;
    }

private:
    Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.to_string(); }

namespace detail {

// Dense ordinary polynomial, index = degree.
using Dense = std::vector<Rational>;

inline void trim(Dense& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Dense to_dense(const LaurentPoly& p, int base) {
    Dense d;
    if (p.is_zero()) return d;
    d.assign(static_cast<std::size_t>(p.max_exp() - base + 1), Rational(0));
    for (const auto& [e, c] : p.terms()) d[static_cast<std::size_t>(e - base)] = c;
    return d;
}

inline LaurentPoly from_dense(const Dense& d, int base) {
    LaurentPoly p;
    for (std::size_t i = 0; i < d.size(); ++i) p.add_term(static_cast<int>(i) + base, d[i]);
    return p;
}

// Long division; returns (quotient, remainder).
inline std::pair<Dense, Dense> divmod(Dense a, const Dense& b) {
    if (b.empty()) throw ArithmeticError("division by zero polynomial");
    trim(a);
    Dense quo;
    if (a.size() >= b.size()) quo.assign(a.size() - b.size() + 1, Rational(0));
    const Rational& lead = b.back();
    while (a.size() >= b.size() && !a.empty()) {
        std::size_t shift = a.size() - b.size();
        Rational f = a.back() / lead;
        quo[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        trim(a);
    }
    trim(quo);
    return {quo, a};
}

inline Dense gcd(Dense a, Dense b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

}  // namespace detail

/// Exact division in the Laurent ring; returns false if `den` does not divide `num`.
inline bool try_divide(const LaurentPoly& num, const LaurentPoly& den, LaurentPoly& out) {
    if (den.is_zero()) throw ArithmeticError("division by zero");
    if (num.is_zero()) { out = LaurentPoly(); return true; }
    auto a = detail::to_dense(num, num.min_exp());
    auto b = detail::to_dense(den, den.min_exp());
    auto [quo, rem] = detail::divmod(a, b);
    if (!rem.empty()) return false;
    out = detail::from_dense(quo, num.min_exp() - den.min_exp());
    return true;
}

inline LaurentPoly divide_exact(const LaurentPoly& num, const LaurentPoly& den) {
    LaurentPoly out;
    if (!try_divide(num, den, out))
        throw ArithmeticError("non-exact division: (" + num.to_string() + ") / (" + den.to_string() + ")");
    return out;
}

/// Quotient of Laurent polynomials. Canonical form: the denominator is an ordinary
/// polynomial with nonzero constant term and leading coefficient 1, coprime to the numerator.
class RatFunc {
public:
    RatFunc() : num_(), den_(1) {}
    RatFunc(const LaurentPoly& p) : num_(p), den_(1) {}  // NOLINT(implicit)
    RatFunc(long c) : num_(c), den_(1) {}                // NOLINT(implicit)
    RatFunc(const LaurentPoly& n, const LaurentPoly& d) : num_(n), den_(d) { normalize(); }

    const LaurentPoly& numerator() const { return num_; }
    const LaurentPoly& denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_laurent() const { return den_ == LaurentPoly(1); }

    LaurentPoly to_laurent() const {
        if (!is_laurent())
            throw ArithmeticError("rational function is not a Laurent polynomial: " + to_string());
        return num_;
    }

    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) { return RatFunc(a.num_ * b.num_, a.den_ * b.den_); }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw ArithmeticError("division by zero rational function");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    std::string to_string() const {
        if (is_laurent()) return num_.to_string();
        return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
    }

private:
    void normalize() {
        if (den_.is_zero()) throw ArithmeticError("zero denominator");
        if (num_.is_zero()) { den_ = LaurentPoly(1); return; }
        // move the monomial part of the denominator into the numerator
        int shift = den_.min_exp();
        num_ = num_.shifted(-shift);
        den_ = den_.shifted(-shift);
        int nb = num_.min_exp();
        auto a = detail::to_dense(num_, nb);
        auto b = detail::to_dense(den_, 0);
        auto g = detail::gcd(a, b);
        if (g.size() > 1) {
            a = detail::divmod(a, g).first;
            b = detail::divmod(b, g).first;
        }
        Rational lead = b.back();
        for (auto& c : a) c /= lead;
        for (auto& c : b) c /= lead;
        num_ = detail::from_dense(a, nb);
        den_ = detail::from_dense(b, 0);
    }

    LaurentPoly num_;
    LaurentPoly den_;
};

/// [k]_d = (q^{dk} - q^{-dk}) / (q^d - q^{-d})
inline LaurentPoly q_int(int k, int d = 1) {
    if (k < 0) throw std::invalid_argument("q_int: negative argument");
    if (d < 1) throw std::invalid_argument("q_int: d must be positive");
    LaurentPoly r;
    for (int j = 0; j < k; ++j) r.add_term(d * (k - 1 - 2 * j), 1);
    return r;
}

inline LaurentPoly q_factorial(int k, int d = 1) {
    if (k < 0) throw std::invalid_argument("q_factorial: negative argument");
    LaurentPoly r(1);
    for (int j = 2; j <= k; ++j) r *= q_int(j, d);
    return r;
}

inline LaurentPoly q_binom(int m, int k, int d = 1) {
    if (k < 0 || k > m) throw std::invalid_argument("q_binom: need 0 <= k <= m");
    return divide_exact(q_factorial(m, d), q_factorial(k, d) * q_factorial(m - k, d));
}

inline LaurentPoly bar(const LaurentPoly& p) { return p.bar(); }

/// {a}_b! = prod_{j=1}^a (1 - q^{jb}) / (1 - q^b)
inline RatFunc brace_factorial(int a, int b) {
    if (a < 0 || b < 1) throw std::invalid_argument("brace_factorial: need a >= 0, b >= 1");
    LaurentPoly num(1), den(1);
    for (int j = 1; j <= a; ++j) {
        num *= LaurentPoly(1) - LaurentPoly::q(j * b);
        den *= LaurentPoly(1) - LaurentPoly::q(b);
    }
    return RatFunc(num, den);
}

namespace detail {

inline bool rational_sqrt(const Rational& c, Rational& out) {
    if (c < 0) return false;
    mpz_class n = c.get_num(), d = c.get_den();
    mpz_class rn = sqrt(n), rd = sqrt(d);
    if (rn * rn != n || rd * rd != d) return false;
    out = Rational(rn, rd);
    out.canonicalize();
    return true;
}

}  // namespace detail

/// Square root in the Laurent ring, normalized to be positive at q = 1
/// (or with positive lowest coefficient when the value at 1 vanishes).
inline LaurentPoly laurent_sqrt(const LaurentPoly& p) {
    if (p.is_zero()) return p;
    int lo = p.min_exp(), hi = p.max_exp();
    if (lo % 2 != 0 || hi % 2 != 0)
        throw ArithmeticError("laurent_sqrt: odd extreme exponent in " + p.to_string());
    Rational r0;
    if (!detail::rational_sqrt(p.coeff(lo), r0))
        throw ArithmeticError("laurent_sqrt: lowest coefficient is not a square in " + p.to_string());
    int m = lo / 2, n = (hi - lo) / 2;
    std::vector<Rational> r(static_cast<std::size_t>(n + 1), Rational(0));
    r[0] = r0;
    for (int k = 1; k <= n; ++k) {
        Rational s = p.coeff(lo + k);
        for (int a = 1; a < k; ++a) s -= r[a] * r[k - a];
        r[k] = s / (2 * r0);
    }
    LaurentPoly root;
    for (int k = 0; k <= n; ++k) root.add_term(m + k, r[k]);
    LaurentPoly rem = p - root * root;
    if (!rem.is_zero())
        throw ArithmeticError("laurent_sqrt: not a perfect square, remainder " + rem.to_string());
    if (root.at_one() < 0) root *= Rational(-1);
    return root;
}

}  // namespace klr
