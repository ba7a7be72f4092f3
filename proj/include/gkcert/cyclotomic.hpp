#pragma once

#include <map>
#include <vector>

#include "gkcert/rational.hpp"

namespace gkcert {

// a + b*sqrt(D) with D a square-free negative integer.  The input form for
// the quadratic irrationalities appearing in character tables.
struct QuadSpec {
    Rat a;
    Rat b;
    long d = 0;
};

// An element of the cyclotomic field Q(zeta_n) for square-free n, held in a
// canonical coefficient form so that equality is map equality.
//
// Basis convention: exponents e with e mod p != 0 for every prime p | n.
// For prime n this is {zeta, ..., zeta^(n-1)} (the relation
// 1 = -(zeta + ... + zeta^(n-1)) is applied), and the conductor is reduced
// whenever the value lies in a smaller field.  Rationals live at conductor 1
// with their value keyed on exponent 0.
class CycValue {
public:
    CycValue() = default;                       // zero
    explicit CycValue(const Rat& r);            // rational constant
    explicit CycValue(long n) : CycValue(Rat(n)) {}

    // zeta_n^e
    static CycValue zeta(long n, long e);
    // canonical value of q.a + q.b*sqrt(q.d), via quadratic Gauss sums
    static CycValue from_quad(const QuadSpec& q);

    long conductor() const { return conductor_; }
    const std::map<long, Rat>& coeffs() const { return coeffs_; }

    bool is_zero() const { return coeffs_.empty(); }
    bool is_rational() const { return conductor_ == 1; }
    Rat as_rational() const;  // throws if not rational

    CycValue operator+(const CycValue& o) const;
    CycValue operator-(const CycValue& o) const;
    CycValue operator*(const CycValue& o) const;
    CycValue operator/(const CycValue& o) const;
    CycValue operator-() const;
    CycValue& operator+=(const CycValue& o) { return *this = *this + o; }
    CycValue& operator-=(const CycValue& o) { return *this = *this - o; }
    CycValue& operator*=(const CycValue& o) { return *this = *this * o; }

    bool operator==(const CycValue& o) const {
        return conductor_ == o.conductor_ && coeffs_ == o.coeffs_;
    }
    bool operator!=(const CycValue& o) const { return !(*this == o); }

    // image under zeta_n -> zeta_n^-1
    CycValue conj() const;
    // image under zeta_n -> zeta_n^j for j coprime to the conductor
    CycValue galois(long j) const;
    // multiplicative inverse (conjugate product over norm); throws on zero
    CycValue inverse() const;
    // field norm down to Q (product of all Galois conjugates)
    Rat norm() const;

    // Coordinates of the value in the canonical tensor basis of Q(zeta_n)
    // (exponents coprime-positioned mod every prime of n), without reducing
    // the conductor.  Used to match coefficients across one equation.
    std::map<long, Rat> coords_at(long n) const;

    std::string str() const;

private:
    long conductor_ = 1;
    std::map<long, Rat> coeffs_;

    // restore the canonical invariants after raw coefficient surgery
    void canonicalize();
    // rewrite exponents divisible by p via the vanishing sum of p-th roots
    void reduce_prime(long p);
    // drop prime p from the conductor when the value lies in the subfield
    bool try_project(long p);
    CycValue lifted(long big_n) const;

    friend CycValue cyc_add(const CycValue&, const CycValue&);
    friend CycValue cyc_mul(const CycValue&, const CycValue&);
};

inline CycValue cyc_add(const CycValue& x, const CycValue& y) { return x + y; }
inline CycValue cyc_mul(const CycValue& x, const CycValue& y) { return x * y; }
inline CycValue conj(const CycValue& x) { return x.conj(); }
inline CycValue quad_to_cyc(const QuadSpec& q) { return CycValue::from_quad(q); }

// Coefficients (c_1, ..., c_{n-1}) with x = sum c_i zeta_n^i, for prime n.
// Unique because the primitive n-th roots are linearly independent over Q.
std::vector<Rat> expand_primitive_basis(const CycValue& x, long n);

std::vector<long> prime_factors(long n);
bool is_prime(long n);

}  // namespace gkcert
