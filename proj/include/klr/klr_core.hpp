#pragma once

#include "cartan.hpp"
#include "perm.hpp"
#include "rational.hpp"
#include "sparse.hpp"
#include "word.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace klr {

// ---------------------------------------------------------------------------
// Q_ij and degrees

/// Integer polynomial in two variables (u, v), keyed by exponent pairs.
struct QPoly {
    std::map<std::pair<int, int>, long long> t;

    bool is_zero() const { return t.empty(); }
    void add(int a, int b, long long c) {
        if (c == 0) return;
        auto& x = t[{a, b}];
        x += c;
        if (x == 0) t.erase({a, b});
    }
    friend bool operator==(const QPoly& a, const QPoly& b) { return a.t == b.t; }

    /// Swaps the roles of u and v.
    QPoly swapped() const {
        QPoly o;
        for (const auto& [e, c] : t) o.add(e.second, e.first, c);
        return o;
    }

    std::string to_string() const {
        if (t.empty()) return "0";
        std::string out;
        bool first = true;
        for (auto it = t.rbegin(); it != t.rend(); ++it) {
            auto [a, b] = it->first;
            long long c = it->second;
            std::string mono;
            auto var = [](const char* x, int e) {
                if (e == 0) return std::string();
                return e == 1 ? std::string(x) : std::string(x) + "^" + std::to_string(e);
            };
            mono = var("u", a);
            if (b) mono += (mono.empty() ? "" : "*") + var("v", b);
            long long mag = c < 0 ? -c : c;
            if (first) out += c < 0 ? "-" : "";
            else out += c < 0 ? " - " : " + ";
            if (mono.empty()) out += std::to_string(mag);
            else out += (mag == 1 ? "" : std::to_string(mag) + "*") + mono;
            first = false;
        }
        return out;
    }
};

/// The finite-type Q_ij(u, v), with the sign fixed by the orientation of the edge.
inline QPoly q_ij(const CartanDatum& D, int i, int j) {
    QPoly Q;
    if (i < 0 || j < 0 || i >= D.rank || j >= D.rank) throw std::invalid_argument("q_ij: index out of range");
    if (i == j) return Q;
    int aij = D.cartan[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    int aji = D.cartan[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    if (aij == 0) {
        Q.add(0, 0, 1);
        return Q;
    }
    long long s = D.arrow(i, j) ? 1 : -1;
    Q.add(-aij, 0, s);
    Q.add(0, -aji, -s);
    return Q;
}

enum class Gen { E, Y, Phi };

/// Degree of e(i), y_r e(i) or phi_r e(i); r is 1-based.
inline int gen_degree(const CartanDatum& D, Gen g, int r, const Word& i) {
    int d = static_cast<int>(i.size());
    switch (g) {
        case Gen::E: return 0;
        case Gen::Y:
            if (r < 1 || r > d) throw std::out_of_range("gen_degree: y index out of range");
            return D.form(i[static_cast<std::size_t>(r - 1)], i[static_cast<std::size_t>(r - 1)]);
        case Gen::Phi:
            if (r < 1 || r >= d) throw std::out_of_range("gen_degree: phi index out of range");
            return -D.form(i[static_cast<std::size_t>(r - 1)], i[static_cast<std::size_t>(r)]);
    }
    return 0;
}

/// Degree of phi_W e(i) for the product phi_{W[0]} ... phi_{W[k-1]} e(i).
inline int phi_word_degree(const CartanDatum& D, const std::vector<int>& W, Word i) {
    int deg = 0;
    for (auto it = W.rbegin(); it != W.rend(); ++it) {
        deg += gen_degree(D, Gen::Phi, *it, i);
        std::swap(i.s[static_cast<std::size_t>(*it - 1)], i.s[static_cast<std::size_t>(*it)]);
    }
    return deg;
}

/// All distinct words of content nu, sorted.
inline std::vector<Word> words_of_content(const RootVector& nu) {
    Word w;
    for (std::size_t k = 0; k < nu.c.size(); ++k)
        for (int m = 0; m < nu.c[k]; ++m) w.push_back(static_cast<int>(k));
    std::vector<Word> out;
    std::sort(w.s.begin(), w.s.end());
    do out.push_back(w);
    while (std::next_permutation(w.s.begin(), w.s.end()));
    return out;
}

/// Polynomial in y_1..y_d: exponent vector -> coefficient.
using YPoly = std::map<std::vector<int>, Rational>;

/// Q(y_r, y_{r+1}) as a YPoly on d variables.
inline YPoly q_at(const QPoly& Q, int r, int d) {
    YPoly P;
    for (const auto& [e, c] : Q.t) {
        std::vector<int> m(static_cast<std::size_t>(d), 0);
        m[static_cast<std::size_t>(r - 1)] = e.first;
        m[static_cast<std::size_t>(r)] = e.second;
        P[m] += Rational(static_cast<long>(c));
    }
    return P;
}

/// (Q(y_{r+2}, y_{r+1}) - Q(y_r, y_{r+1})) / (y_{r+2} - y_r), by the complete homogeneous expansion.
inline YPoly braid_defect(const QPoly& Q, int r, int d) {
    YPoly P;
    for (const auto& [e, c] : Q.t) {
        auto [a, b] = e;
        for (int k = 0; k < a; ++k) {
            std::vector<int> m(static_cast<std::size_t>(d), 0);
            m[static_cast<std::size_t>(r + 1)] = k;
            m[static_cast<std::size_t>(r - 1)] = a - 1 - k;
            m[static_cast<std::size_t>(r)] = b;
            P[m] += Rational(static_cast<long>(c));
        }
    }
    for (auto it = P.begin(); it != P.end();) it = it->second == 0 ? P.erase(it) : std::next(it);
    return P;
}

// ---------------------------------------------------------------------------
// Normal-form engine

class KlrEngine;

/// Element of H(nu): a combination of phi_w y^m e(i) with phi_w taken along the engine's canonical word.
class KlrElement {
public:
    using Terms = std::unordered_map<std::string, Rational>;

    KlrElement() = default;
    KlrElement(KlrEngine* eng, Terms t) : eng_(eng), terms_(std::move(t)) {}

    KlrEngine* engine() const { return eng_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    KlrElement& operator+=(const KlrElement& o);
    KlrElement& operator-=(const KlrElement& o);
    KlrElement& operator*=(const Rational& c);
    friend KlrElement operator+(KlrElement a, const KlrElement& b) { return a += b; }
    friend KlrElement operator-(KlrElement a, const KlrElement& b) { return a -= b; }
    friend KlrElement operator*(KlrElement a, const Rational& c) { return a *= c; }
    friend KlrElement operator*(const Rational& c, KlrElement a) { return a *= c; }
    friend KlrElement operator*(const KlrElement& a, const KlrElement& b);
    friend bool operator==(const KlrElement& a, const KlrElement& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const KlrElement& a, const KlrElement& b) { return !(a == b); }

    std::string to_string() const;

private:
    KlrEngine* eng_ = nullptr;
    Terms terms_;
};

/// Straightening engine for H(nu) over the basis phi_w y^m e(i).
/// split = 0 uses the lexicographically smallest reduced word for every w.  split = d1 > 0
/// instead writes w = w' x (w' a minimal coset representative for S_{d1} x S_{d-d1}) and uses
/// lexmin(w') followed by lexmin(x), so that phi_w = phi_{w'} phi_x as needed by induction.
/// Memo tables make an engine unsafe for concurrent use; use one engine per thread.
class KlrEngine {
public:
    using Terms = KlrElement::Terms;

    struct Mono {
        Perm w;
        std::vector<int> m;
        Word i;
    };

    KlrEngine(const CartanDatum& D, RootVector nu, int split = 0)
        : D_(&D), nu_(std::move(nu)), d_(nu_.height()), split_(split) {
        if (nu_.c.size() != D.size() || !nu_.nonnegative()) throw std::invalid_argument("KlrEngine: bad weight");
        if (split < 0 || split > d_) throw std::invalid_argument("KlrEngine: bad split");
        idems_ = words_of_content(nu_);
    }

    const CartanDatum& datum() const { return *D_; }
    const RootVector& nu() const { return nu_; }
    int d() const { return d_; }
    int split() const { return split_; }
    const std::vector<Word>& idempotents() const { return idems_; }

    int first_letter(const Perm& u) const {
        if (split_ > 0 && split_ < d_) {
            auto [w, x] = coset_split(u, split_);
            if (!is_identity(w)) return smallest_left_descent(w);
        }
        return smallest_left_descent(u);
    }

    std::vector<int> canonical_word(Perm u) const {
        std::vector<int> W;
        while (int a = first_letter(u)) {
            W.push_back(a);
            u = left_mul(a, u);
        }
        return W;
    }

    std::string key(const Perm& w, const std::vector<int>& m, const Word& i) const {
        std::string k(static_cast<std::size_t>(3 * d_), '\0');
        for (int a = 0; a < d_; ++a) {
            k[static_cast<std::size_t>(a)] = static_cast<char>(w[static_cast<std::size_t>(a)]);
            k[static_cast<std::size_t>(d_ + a)] = static_cast<char>(m[static_cast<std::size_t>(a)]);
            k[static_cast<std::size_t>(2 * d_ + a)] = i.s[static_cast<std::size_t>(a)];
        }
        return k;
    }

    Mono decode(const std::string& k) const {
        Mono mo{Perm(static_cast<std::size_t>(d_)), std::vector<int>(static_cast<std::size_t>(d_)), Word()};
        for (int a = 0; a < d_; ++a) {
            mo.w[static_cast<std::size_t>(a)] = static_cast<unsigned char>(k[static_cast<std::size_t>(a)]);
            mo.m[static_cast<std::size_t>(a)] = static_cast<unsigned char>(k[static_cast<std::size_t>(d_ + a)]);
        }
        mo.i = Word(k.substr(static_cast<std::size_t>(2 * d_)));
        return mo;
    }

    /// The idempotent on the left of phi_w y^m e(i).
    Word left_weight(const std::string& k) const {
        Mono mo = decode(k);
        return act(mo.w, mo.i);
    }

    int term_degree(const std::string& k) const {
        Mono mo = decode(k);
        int deg = phi_word_degree(*D_, canonical_word(mo.w), mo.i);
        for (int a = 0; a < d_; ++a)
            deg += mo.m[static_cast<std::size_t>(a)] * D_->form(mo.i[static_cast<std::size_t>(a)], mo.i[static_cast<std::size_t>(a)]);
        return deg;
    }

    // --- constructors of elements
    KlrElement zero() { return KlrElement(this, {}); }
    KlrElement monomial(const Perm& w, const std::vector<int>& m, const Word& i, const Rational& c = Rational(1)) {
        check_idem(i);
        Terms t;
        if (c != 0) t.emplace(key(w, m, i), c);
        return KlrElement(this, std::move(t));
    }
    KlrElement e(const Word& i) { return monomial(identity_perm(d_), zeros(), i); }
    KlrElement one() {
        Terms t;
        for (const auto& i : idems_) t.emplace(key(identity_perm(d_), zeros(), i), Rational(1));
        return KlrElement(this, std::move(t));
    }
    KlrElement y(int r) { return mul_y(r, one()); }
    KlrElement phi(int r) { return mul_phi(r, one()); }
    /// phi_w y^m e(i) in this engine's basis.
    KlrElement basis(const Perm& w, const std::vector<int>& m, const Word& i) { return monomial(w, m, i); }
    /// Product phi_{W[0]} ... phi_{W[k-1]} e(i) along an arbitrary word, normalized.
    KlrElement phi_word(const std::vector<int>& W, const Word& i) {
        KlrElement x = e(i);
        for (auto it = W.rbegin(); it != W.rend(); ++it) x = mul_phi(*it, x);
        return x;
    }

    // --- left multiplication by generators
    KlrElement mul_e(const Word& i, const KlrElement& x) {
        Terms out;
        for (const auto& [k, c] : x.terms())
            if (left_weight(k) == i) out.emplace(k, c);
        return KlrElement(this, std::move(out));
    }
    KlrElement mul_y(int r, const KlrElement& x) {
        check_y(r);
        return KlrElement(this, left_y(r, x.terms()));
    }
    KlrElement mul_phi(int r, const KlrElement& x) {
        check_phi(r);
        return KlrElement(this, left_phi(r, x.terms()));
    }
    KlrElement mul_poly(const YPoly& P, const KlrElement& x) { return KlrElement(this, left_poly(P, x.terms())); }

    KlrElement mul(const KlrElement& a, const KlrElement& b) {
        Terms out;
        for (const auto& [k, c] : a.terms()) {
            Mono mo = decode(k);
            Terms x = filter_left(mo.i, b.terms());
            x = left_ymono(mo.m, x);
            std::vector<int> W = canonical_word(mo.w);
            for (auto it = W.rbegin(); it != W.rend(); ++it) x = left_phi(*it, x);
            add_scaled(out, x, c);
        }
        return KlrElement(this, std::move(out));
    }

    /// Anti-automorphism fixing e(i), y_r and phi_r.
    KlrElement psi(const KlrElement& x) {
        Terms out;
        for (const auto& [k, c] : x.terms()) {
            Mono mo = decode(k);
            Terms t = basis_terms(identity_perm(d_), zeros(), act(mo.w, mo.i));
            for (int a : canonical_word(mo.w)) t = left_phi(a, t);
            t = left_ymono(mo.m, t);
            t = filter_left(mo.i, t);
            add_scaled(out, t, c);
        }
        return KlrElement(this, std::move(out));
    }

    /// Automorphism e(i) -> e(reversed i), y_r -> y_{d+1-r}, phi_r -> -phi_{d-r}.
    KlrElement tau(const KlrElement& x) {
        Terms out;
        for (const auto& [k, c] : x.terms()) {
            Mono mo = decode(k);
            std::vector<int> m(mo.m.rbegin(), mo.m.rend());
            Terms t = basis_terms(identity_perm(d_), m, mo.i.reversed());
            std::vector<int> W = canonical_word(mo.w);
            for (auto it = W.rbegin(); it != W.rend(); ++it) t = left_phi(d_ - *it, t);
            add_scaled(out, t, W.size() % 2 ? -c : c);
        }
        return KlrElement(this, std::move(out));
    }

    std::size_t memo_size() const { return phi_memo_.size() + y_memo_.size() + lead_memo_.size(); }

    std::string term_to_string(const std::string& k) const {
        Mono mo = decode(k);
        std::string s = "phi[";
        auto W = canonical_word(mo.w);
        for (std::size_t a = 0; a < W.size(); ++a) s += (a ? "," : "") + std::to_string(W[a]);
        s += "]";
        bool any = false;
        for (int a = 0; a < d_; ++a)
            if (mo.m[static_cast<std::size_t>(a)]) {
                s += (any ? "" : "*") + std::string("y") + std::to_string(a + 1);
                if (mo.m[static_cast<std::size_t>(a)] > 1) s += "^" + std::to_string(mo.m[static_cast<std::size_t>(a)]);
                any = true;
            }
        return s + "*e" + mo.i.to_string();
    }

private:
    struct Move {
        std::vector<int> before;
        std::size_t pos;
    };

    std::vector<int> zeros() const { return std::vector<int>(static_cast<std::size_t>(d_), 0); }

    void check_idem(const Word& i) const {
        if (static_cast<int>(i.size()) != d_ || content(*D_, i) != nu_)
            throw std::invalid_argument("idempotent " + i.to_string() + " not of weight " + nu_.to_string());
    }
    void check_y(int r) const {
        if (r < 1 || r > d_) throw std::out_of_range("y index out of range");
    }
    void check_phi(int r) const {
        if (r < 1 || r >= d_) throw std::out_of_range("phi index out of range");
    }

    static void add_term(Terms& t, const std::string& k, const Rational& c) {
        if (c == 0) return;
        auto [it, fresh] = t.try_emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) t.erase(it);
        }
    }
    static void add_scaled(Terms& dst, const Terms& src, const Rational& c) {
        for (const auto& [k, v] : src) add_term(dst, k, v * c);
    }

    Terms basis_terms(const Perm& w, const std::vector<int>& m, const Word& i) const {
        Terms t;
        t.emplace(key(w, m, i), Rational(1));
        return t;
    }

    // dst += c * src * y^m (y^m multiplies on the right, next to e(i))
    void add_right_y(Terms& dst, const Terms& src, const std::string& mkey, const Rational& c) const {
        bool trivial = std::all_of(mkey.begin() + d_, mkey.begin() + 2 * d_, [](char x) { return x == 0; });
        for (const auto& [k, v] : src) {
            if (trivial) {
                add_term(dst, k, v * c);
                continue;
            }
            std::string nk = k;
            for (int a = 0; a < d_; ++a)
                nk[static_cast<std::size_t>(d_ + a)] = static_cast<char>(
                    static_cast<unsigned char>(nk[static_cast<std::size_t>(d_ + a)]) +
                    static_cast<unsigned char>(mkey[static_cast<std::size_t>(d_ + a)]));
            add_term(dst, nk, v * c);
        }
    }

    Terms filter_left(const Word& i, const Terms& x) const {
        Terms out;
        for (const auto& [k, c] : x)
            if (left_weight(k) == i) out.emplace(k, c);
        return out;
    }

    Terms left_phi(int r, const Terms& x) {
        Terms out;
        for (const auto& [k, c] : x) {
            Mono mo = decode(k);
            add_right_y(out, phi_basis(r, mo.w, mo.i), k, c);
        }
        return out;
    }

    Terms left_y(int r, const Terms& x) {
        Terms out;
        for (const auto& [k, c] : x) {
            Mono mo = decode(k);
            add_right_y(out, y_basis(r, mo.w, mo.i), k, c);
        }
        return out;
    }

    Terms left_ymono(const std::vector<int>& m, Terms x) {
        for (int a = 0; a < d_; ++a)
            for (int p = 0; p < m[static_cast<std::size_t>(a)]; ++p) x = left_y(a + 1, x);
        return x;
    }

    Terms left_poly(const YPoly& P, const Terms& x) {
        Terms out;
        for (const auto& [m, c] : P) add_scaled(out, left_ymono(m, x), c);
        return out;
    }

    std::string memo_key(char tag, int r, const Perm& u, const Word& i) const {
        std::string k(1, tag);
        k.push_back(static_cast<char>(r));
        for (int a : u) k.push_back(static_cast<char>(a));
        return k + i.s;
    }

    /// y_r phi_u e(i)
    const Terms& y_basis(int r, const Perm& u, const Word& i) {
        std::string mk = memo_key('y', r, u, i);
        if (auto it = y_memo_.find(mk); it != y_memo_.end()) return it->second;
        Terms out;
        if (is_identity(u)) {
            std::vector<int> m = zeros();
            m[static_cast<std::size_t>(r - 1)] = 1;
            out.emplace(key(u, m, i), Rational(1));
        } else {
            int a = first_letter(u);
            Perm u1 = left_mul(a, u);
            Word j = act(u1, i);
            int r1 = r == a ? a + 1 : (r == a + 1 ? a : r);
            Terms x = y_basis(r1, u1, i);
            out = left_phi(a, x);
            if ((r == a || r == a + 1) && j[static_cast<std::size_t>(a - 1)] == j[static_cast<std::size_t>(a)])
                add_term(out, key(u1, zeros(), i), Rational(r == a + 1 ? 1 : -1));
        }
        return y_memo_.emplace(std::move(mk), std::move(out)).first->second;
    }

    /// phi_r phi_u e(i)
    const Terms& phi_basis(int r, const Perm& u, const Word& i) {
        std::string mk = memo_key('p', r, u, i);
        if (auto it = phi_memo_.find(mk); it != phi_memo_.end()) return it->second;
        Terms out;
        Perm v = left_mul(r, u);
        if (!left_descent(u, r)) {
            if (first_letter(v) == r) {
                out.emplace(key(v, zeros(), i), Rational(1));
            } else {
                std::vector<int> W{r};
                auto cw = canonical_word(u);
                W.insert(W.end(), cw.begin(), cw.end());
                out = lead(W, i);
            }
        } else {
            std::vector<int> W = canonical_word(u);
            std::vector<Move> moves;
            bring_to_front(W, 0, r, moves);
            Word j = act(v, i);
            QPoly Q = q_ij(*D_, j[static_cast<std::size_t>(r - 1)], j[static_cast<std::size_t>(r)]);
            std::vector<int> rest(W.begin() + 1, W.end());
            out = left_poly(q_at(Q, r, d_), lead(rest, i));
            for (const auto& mv : moves) add_scaled(out, left_phi(r, correction(mv, i)), Rational(1));
        }
        return phi_memo_.emplace(std::move(mk), std::move(out)).first->second;
    }

    /// phi_{W[0]} ... phi_{W[k-1]} e(i) for a reduced word W.
    Terms lead(const std::vector<int>& W, const Word& i) {
        std::string mk(1, 'l');
        for (int a : W) mk.push_back(static_cast<char>(a));
        mk.push_back('|');
        mk += i.s;
        if (auto it = lead_memo_.find(mk); it != lead_memo_.end()) return it->second;
        Terms out;
        if (W.empty()) {
            out = basis_terms(identity_perm(d_), zeros(), i);
        } else {
            Perm v = perm_of_word(W, d_);
            int a = first_letter(v);
            if (W[0] == a) {
                out = left_phi(a, lead(std::vector<int>(W.begin() + 1, W.end()), i));
            } else {
                std::vector<int> Wc = W;
                std::vector<Move> moves;
                bring_to_front(Wc, 0, a, moves);
                out = lead(Wc, i);
                for (const auto& mv : moves) add_scaled(out, correction(mv, i), Rational(1));
            }
        }
        return lead_memo_.emplace(std::move(mk), std::move(out)).first->second;
    }

    /// Rewrites W[off..] by commutation and braid moves so that it starts with a
    /// (a must be a left descent of the permutation of W[off..]); braid moves are recorded.
    void bring_to_front(std::vector<int>& W, std::size_t off, int a, std::vector<Move>& moves) const {
        if (off >= W.size()) throw std::logic_error("bring_to_front: not a descent");
        if (W[off] == a) return;
        int b = W[off];
        bring_to_front(W, off + 1, a, moves);
        if (std::abs(a - b) > 1) {
            std::swap(W[off], W[off + 1]);
            return;
        }
        bring_to_front(W, off + 2, b, moves);
        moves.push_back({W, off});
        W[off] = a;
        W[off + 1] = b;
        W[off + 2] = a;
    }

    /// phi_{before} - phi_{after} for one recorded braid move, applied to e(i).
    Terms correction(const Move& mv, const Word& i) {
        const auto& W = mv.before;
        int b = W[mv.pos], c = W[mv.pos + 1];
        int r = std::min(b, c);
        std::vector<int> P(W.begin(), W.begin() + static_cast<long>(mv.pos));
        std::vector<int> S(W.begin() + static_cast<long>(mv.pos) + 3, W.end());
        Word j = act(perm_of_word(S, d_), i);
        if (j[static_cast<std::size_t>(r - 1)] != j[static_cast<std::size_t>(r + 1)]) return {};
        QPoly Q = q_ij(*D_, j[static_cast<std::size_t>(r - 1)], j[static_cast<std::size_t>(r)]);
        Terms x = left_poly(braid_defect(Q, r, d_), lead(S, i));
        for (auto it = P.rbegin(); it != P.rend(); ++it) x = left_phi(*it, x);
        // phi_r phi_{r+1} phi_r = phi_{r+1} phi_r phi_{r+1} - D on e(j)
        Rational sign(b == r ? -1 : 1);
        Terms out;
        add_scaled(out, x, sign);
        return out;
    }

    const CartanDatum* D_;
    RootVector nu_;
    int d_;
    int split_;
    std::vector<Word> idems_;
    std::unordered_map<std::string, Terms> phi_memo_, y_memo_, lead_memo_;
};

inline KlrElement& KlrElement::operator+=(const KlrElement& o) {
    if (!eng_) eng_ = o.eng_;
    for (const auto& [k, c] : o.terms_) {
        auto [it, fresh] = terms_.try_emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}
inline KlrElement& KlrElement::operator-=(const KlrElement& o) { return *this += o * Rational(-1); }
inline KlrElement& KlrElement::operator*=(const Rational& c) {
    if (c == 0) terms_.clear();
    for (auto& [k, v] : terms_) v *= c;
    return *this;
}
inline KlrElement operator*(const KlrElement& a, const KlrElement& b) {
    KlrEngine* e = a.eng_ ? a.eng_ : b.eng_;
    if (!e) return KlrElement();
    if (a.eng_ && b.eng_ && a.eng_ != b.eng_) throw std::invalid_argument("KLR product across engines");
    return e->mul(a, b);
}
inline std::string KlrElement::to_string() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<std::string, Rational>> v(terms_.begin(), terms_.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += " + ";
        if (v[k].second != 1) out += "(" + klr::to_string(v[k].second) + ")*";
        out += eng_->term_to_string(v[k].first);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Modules given by matrices, and the relation suite

/// Finite-dimensional weight module: basis vectors tagged by weight word and degree,
/// with matrices for y_1..y_d and phi_1..phi_{d-1}.
struct ModuleAction {
    const CartanDatum* datum = nullptr;
    RootVector nu;
    int d = 0;
    std::vector<Word> weight;
    std::vector<int> degree;
    std::vector<SparseMat> y;    // y[r-1]
    std::vector<SparseMat> phi;  // phi[r-1]

    int dim() const { return static_cast<int>(weight.size()); }
    const SparseMat& Y(int r) const { return y.at(static_cast<std::size_t>(r - 1)); }
    const SparseMat& Phi(int r) const { return phi.at(static_cast<std::size_t>(r - 1)); }
    SparseMat& Y(int r) { return y.at(static_cast<std::size_t>(r - 1)); }
    SparseMat& Phi(int r) { return phi.at(static_cast<std::size_t>(r - 1)); }
};

struct RelationFailure {
    std::string relation;
    int r = 0, s = 0;
    Word idem;
    int vector = -1;
    std::string defect;

    nlohmann::json to_json() const {
        return {{"relation", relation}, {"r", r}, {"s", s}, {"idem", idem.compact()}, {"vector", vector}, {"defect", defect}};
    }
};

struct RelationReport {
    std::map<std::string, std::pair<long, long>> counts;  // relation -> (instances, failures)
    std::vector<RelationFailure> failures;

    bool ok() const { return failures.empty(); }
    long instances() const {
        long n = 0;
        for (const auto& [k, v] : counts) n += v.first;
        return n;
    }
    void merge(const RelationReport& o, std::size_t max_witnesses) {
        for (const auto& [k, v] : o.counts) {
            counts[k].first += v.first;
            counts[k].second += v.second;
        }
        for (const auto& f : o.failures)
            if (failures.size() < max_witnesses) failures.push_back(f);
    }
    nlohmann::json to_json() const {
        nlohmann::json j;
        j["ok"] = ok();
        for (const auto& [k, v] : counts) j["relations"][k] = {{"instances", v.first}, {"failed", v.second}};
        j["failures"] = nlohmann::json::array();
        for (const auto& f : failures) j["failures"].push_back(f.to_json());
        return j;
    }
    std::string summary() const {
        std::ostringstream os;
        long fails = 0;
        for (const auto& [k, v] : counts) fails += v.second;
        os << (ok() ? "PASS" : "FAIL") << " (" << instances() << " relation instances, " << fails << " failed)";
        return os.str();
    }
};

inline std::string sparse_to_string(const SparseVec& v, std::size_t limit = 6) {
    std::string s = "{";
    std::size_t n = 0;
    for (const auto& [k, c] : v) {
        if (n == limit) {
            s += ", ...";
            break;
        }
        s += (n ? ", " : "") + std::to_string(k) + ": " + to_string(c);
        ++n;
    }
    return s + "}";
}

namespace detail {

inline SparseVec apply_ymono(const ModuleAction& M, const std::vector<int>& m, SparseVec v) {
    for (int a = 0; a < M.d; ++a)
        for (int p = 0; p < m[static_cast<std::size_t>(a)]; ++p) v = M.Y(a + 1).apply(v);
    return v;
}

inline SparseVec apply_ypoly(const ModuleAction& M, const YPoly& P, const SparseVec& v) {
    SparseVec out;
    for (const auto& [m, c] : P) axpy(out, apply_ymono(M, m, v), c);
    return out;
}

inline RelationReport check_weight(const ModuleAction& M, const Word& i, const std::vector<int>& vecs,
                                   std::size_t max_witnesses) {
    const CartanDatum& D = *M.datum;
    RelationReport rep;
    int d = M.d;
    auto run = [&](const std::string& rel, int r, int s, auto&& defect_of) {
        auto& cnt = rep.counts[rel];
        ++cnt.first;
        for (int v : vecs) {
            SparseVec def = defect_of(v);
            if (!def.empty()) {
                ++cnt.second;
                if (rep.failures.size() < max_witnesses)
                    rep.failures.push_back({rel, r, s, i, v, sparse_to_string(def)});
                return;
            }
        }
    };
    auto weight_defect = [&](const SparseVec& img, const Word& want) {
        SparseVec bad;
        for (const auto& [k, c] : img)
            if (M.weight[static_cast<std::size_t>(k)] != want) bad[k] = c;
        return bad;
    };
    auto degree_defect = [&](const SparseVec& img, int want) {
        SparseVec bad;
        for (const auto& [k, c] : img)
            if (M.degree[static_cast<std::size_t>(k)] != want) bad[k] = c;
        return bad;
    };

    run("3.2.2", 0, 0, [&](int) {
        SparseVec bad;
        if (static_cast<int>(i.size()) != d || content(D, i) != M.nu) bad[0] = 1;
        return bad;
    });
    for (int r = 1; r <= d; ++r) {
        run("3.2.3", r, 0, [&](int v) { return weight_defect(M.Y(r).col(v), i); });
        run("3.2.12.y", r, 0, [&](int v) {
            return degree_defect(M.Y(r).col(v), M.degree[static_cast<std::size_t>(v)] + gen_degree(D, Gen::Y, r, i));
        });
        for (int s = r + 1; s <= d; ++s)
            run("3.2.5", r, s, [&](int v) {
                return M.Y(r).apply(M.Y(s).col(v)) - M.Y(s).apply(M.Y(r).col(v));
            });
    }
    for (int r = 1; r < d; ++r) {
        Word si = i;
        std::swap(si.s[static_cast<std::size_t>(r - 1)], si.s[static_cast<std::size_t>(r)]);
        bool eq = i[static_cast<std::size_t>(r - 1)] == i[static_cast<std::size_t>(r)];
        run("3.2.4", r, 0, [&](int v) { return weight_defect(M.Phi(r).col(v), si); });
        run("3.2.12.phi", r, 0, [&](int v) {
            return degree_defect(M.Phi(r).col(v), M.degree[static_cast<std::size_t>(v)] + gen_degree(D, Gen::Phi, r, i));
        });
        for (int s = 1; s <= d; ++s) {
            if (s == r || s == r + 1) continue;
            run("3.2.6", r, s, [&](int v) {
                return M.Phi(r).apply(M.Y(s).col(v)) - M.Y(s).apply(M.Phi(r).col(v));
            });
        }
        for (int s = r + 2; s < d; ++s)
            run("3.2.7", r, s, [&](int v) {
                return M.Phi(r).apply(M.Phi(s).col(v)) - M.Phi(s).apply(M.Phi(r).col(v));
            });
        run("3.2.8", r, 0, [&](int v) {
            SparseVec lhs = M.Phi(r).apply(M.Y(r + 1).col(v));
            SparseVec rhs = M.Y(r).apply(M.Phi(r).col(v));
            if (eq) axpy(rhs, unit_vec(v), Rational(1));
            return lhs - rhs;
        });
        run("3.2.9", r, 0, [&](int v) {
            SparseVec lhs = M.Y(r + 1).apply(M.Phi(r).col(v));
            SparseVec rhs = M.Phi(r).apply(M.Y(r).col(v));
            if (eq) axpy(rhs, unit_vec(v), Rational(1));
            return lhs - rhs;
        });
        QPoly Q = q_ij(D, i[static_cast<std::size_t>(r - 1)], i[static_cast<std::size_t>(r)]);
        YPoly Qy = q_at(Q, r, d);
        run("3.2.10", r, 0, [&](int v) {
            return M.Phi(r).apply(M.Phi(r).col(v)) - apply_ypoly(M, Qy, unit_vec(v));
        });
        if (r + 1 < d) {
            YPoly Dy;
            if (i[static_cast<std::size_t>(r - 1)] == i[static_cast<std::size_t>(r + 1)]) Dy = braid_defect(Q, r, d);
            run("3.2.11", r, 0, [&](int v) {
                SparseVec a = M.Phi(r + 1).apply(M.Phi(r).apply(M.Phi(r + 1).col(v)));
                SparseVec b = M.Phi(r).apply(M.Phi(r + 1).apply(M.Phi(r).col(v)));
                return (a - b) - apply_ypoly(M, Dy, unit_vec(v));
            });
        }
    }
    return rep;
}

}  // namespace detail

/// Checks every defining relation and the grading as matrix identities on each weight space.
/// The e(i) are the projections onto the weight tags, so the idempotent relations hold by construction.
/// Relation ids in reports follow the standard numbering of the presentation.
inline RelationReport relation_suite(const ModuleAction& M, int jobs = 1, std::size_t max_witnesses = 20) {
    if (!M.datum) throw std::invalid_argument("relation_suite: module without datum");
    int n = M.dim();
    if (static_cast<int>(M.degree.size()) != n || static_cast<int>(M.y.size()) != M.d ||
        static_cast<int>(M.phi.size()) != std::max(M.d - 1, 0))
        throw std::invalid_argument("relation_suite: inconsistent module shape");
    for (const auto& m : M.y)
        if (m.dim() != n) throw std::invalid_argument("relation_suite: dimension mismatch");
    for (const auto& m : M.phi)
        if (m.dim() != n) throw std::invalid_argument("relation_suite: dimension mismatch");

    std::map<std::string, std::vector<int>> groups;
    for (int v = 0; v < n; ++v) groups[M.weight[static_cast<std::size_t>(v)].s].push_back(v);
    std::vector<std::pair<Word, std::vector<int>>> work;
    for (auto& [w, vs] : groups) work.emplace_back(Word(w), std::move(vs));

    std::vector<RelationReport> parts(work.size());
    int T = std::max(1, std::min<int>(jobs, static_cast<int>(work.size())));
    if (T == 1) {
        for (std::size_t k = 0; k < work.size(); ++k) parts[k] = detail::check_weight(M, work[k].first, work[k].second, max_witnesses);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < T; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t k = static_cast<std::size_t>(t); k < work.size(); k += static_cast<std::size_t>(T))
                    parts[k] = detail::check_weight(M, work[k].first, work[k].second, max_witnesses);
            });
        for (auto& th : pool) th.join();
    }
    RelationReport rep;
    for (const auto& p : parts) rep.merge(p, max_witnesses);
    return rep;
}

}  // namespace klr
