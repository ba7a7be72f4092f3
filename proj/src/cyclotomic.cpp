#include "gkcert/cyclotomic.hpp"

#include <numeric>
#include <sstream>

namespace gkcert {

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<long> prime_factors(long n) {
    std::vector<long> ps;
    for (long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            ps.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

namespace {
bool is_squarefree(long n) {
    for (long d = 2; d * d <= n; ++d) {
        if (n % (d * d) == 0) return false;
    }
    return n >= 1;
}

long mod(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}
}  // namespace

CycValue::CycValue(const Rat& r) {
    if (r != 0) coeffs_[0] = r;
}

CycValue CycValue::zeta(long n, long e) {
    if (n < 1) throw Error("zeta: conductor must be positive");
    if (!is_squarefree(n)) throw Error("zeta: conductor must be square-free");
    CycValue v;
    v.conductor_ = n;
    v.coeffs_[mod(e, n)] = 1;
    v.canonicalize();
    return v;
}

Rat CycValue::as_rational() const {
    if (!is_rational()) throw Error("CycValue is irrational: " + str());
    auto it = coeffs_.find(0);
    return it == coeffs_.end() ? Rat(0) : it->second;
}

void CycValue::reduce_prime(long p) {
    // 1 + zeta_p + ... + zeta_p^(p-1) = 0: push any exponent whose p-part is
    // trivial onto the p-1 nontrivial companions.
    const long n = conductor_;
    const long q = n / p;
    std::map<long, Rat> out;
    for (const auto& [e, c] : coeffs_) {
        if (c == 0) continue;
        if (e % p != 0) {
            out[e] += c;
        } else {
            for (long a = 1; a < p; ++a) out[mod(e + a * q, n)] -= c;
        }
    }
    coeffs_ = std::move(out);
}

bool CycValue::try_project(long p) {
    // The value lies in Q(zeta_{n/p}) iff, grouping basis exponents by their
    // residue mod n/p, the coefficients within each group agree (and every
    // group is full: all p-1 companions present).
    const long n = conductor_;
    const long q = n / p;
    if (q == 1) {
        // down to Q: all n-1 basis coefficients must agree
        if (coeffs_.size() != static_cast<std::size_t>(p - 1)) return false;
        Rat c = coeffs_.begin()->second;
        for (const auto& [e, ce] : coeffs_)
            if (ce != c) return false;
        conductor_ = 1;
        coeffs_.clear();
        if (c != 0) coeffs_[0] = -c;
        return true;
    }
    std::map<long, Rat> groups;   // residue mod q -> common coefficient
    std::map<long, long> counts;
    for (const auto& [e, c] : coeffs_) {
        long r = e % q;
        auto it = groups.find(r);
        if (it == groups.end()) {
            groups[r] = c;
            counts[r] = 1;
        } else {
            if (it->second != c) return false;
            ++counts[r];
        }
    }
    for (const auto& [r, cnt] : counts) {
        (void)r;
        if (cnt != p - 1) return false;
    }
    // The lift convention is zeta_q = zeta_n^p, so the residue r mod q held
    // by a group corresponds to the conductor-q exponent b with p*b = r.
    long pinv = 1;
    for (long t = 1; t < q; ++t) {
        if ((p % q) * t % q == 1 % q) {
            pinv = t;
            break;
        }
    }
    std::map<long, Rat> out;
    for (const auto& [r, c] : groups) {
        Rat nc = -c;  // the p-part of each group sums to -1
        if (nc != 0) out[(r * pinv) % q] = nc;
    }
    conductor_ = q;
    coeffs_ = std::move(out);
    return true;
}

void CycValue::canonicalize() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->second == 0) it = coeffs_.erase(it);
        else ++it;
    }
    if (conductor_ == 1) return;
    for (long p : prime_factors(conductor_)) reduce_prime(p);
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->second == 0) it = coeffs_.erase(it);
        else ++it;
    }
    if (coeffs_.empty()) {
        conductor_ = 1;
        return;
    }
    bool again = true;
    while (again && conductor_ > 1) {
        again = false;
        for (long p : prime_factors(conductor_)) {
            if (try_project(p)) {
                again = true;
                break;
            }
        }
    }
}

CycValue CycValue::lifted(long big_n) const {
    if (big_n % conductor_ != 0) throw Error("lift: conductor mismatch");
    CycValue v;
    v.conductor_ = big_n;
    const long f = big_n / conductor_;
    for (const auto& [e, c] : coeffs_) v.coeffs_[e * f] = c;
    return v;  // caller canonicalizes if needed
}

CycValue CycValue::operator+(const CycValue& o) const {
    long n = std::lcm(conductor_, o.conductor_);
    CycValue a = lifted(n), b = o.lifted(n);
    for (const auto& [e, c] : b.coeffs_) a.coeffs_[e] += c;
    a.canonicalize();
    return a;
}

CycValue CycValue::operator-() const {
    CycValue v(*this);
    for (auto& [e, c] : v.coeffs_) c = -c;
    return v;
}

CycValue CycValue::operator-(const CycValue& o) const { return *this + (-o); }

CycValue CycValue::operator*(const CycValue& o) const {
    long n = std::lcm(conductor_, o.conductor_);
    CycValue a = lifted(n), b = o.lifted(n);
    CycValue out;
    out.conductor_ = n;
    for (const auto& [e1, c1] : a.coeffs_)
        for (const auto& [e2, c2] : b.coeffs_) out.coeffs_[mod(e1 + e2, n)] += c1 * c2;
    out.canonicalize();
    return out;
}

CycValue CycValue::galois(long j) const {
    if (std::gcd(mod(j, conductor_ == 1 ? 1 : conductor_), conductor_) != 1)
        throw Error("galois: exponent not coprime to conductor");
    CycValue v;
    v.conductor_ = conductor_;
    for (const auto& [e, c] : coeffs_) v.coeffs_[mod(e * j, conductor_)] += c;
    v.canonicalize();
    return v;
}

CycValue CycValue::conj() const {
    return galois(conductor_ - 1 == 0 ? 1 : conductor_ - 1);
}

Rat CycValue::norm() const {
    if (conductor_ == 1) return as_rational();
    CycValue prod(Rat(1));
    for (long j = 1; j < conductor_; ++j) {
        if (std::gcd(j, conductor_) != 1) continue;
        prod *= galois(j);
    }
    return prod.as_rational();
}

CycValue CycValue::inverse() const {
    if (is_zero()) throw Error("division by zero CycValue");
    if (is_rational()) return CycValue(Rat(1) / as_rational());
    CycValue prod(Rat(1));
    for (long j = 2; j < conductor_; ++j) {
        if (std::gcd(j, conductor_) != 1) continue;
        prod *= galois(j);
    }
    Rat nm = (*this * prod).as_rational();  // the norm; rational by Galois theory
    if (nm == 0) throw Error("zero norm for nonzero CycValue (internal)");
    return prod * CycValue(Rat(1) / nm);
}

CycValue CycValue::operator/(const CycValue& o) const { return *this * o.inverse(); }

CycValue CycValue::from_quad(const QuadSpec& q) {
    if (q.d == 0 || q.d == 1) throw Error("quad_to_cyc: D must not be 0 or 1");
    if (q.d > 0) throw Error("quad_to_cyc: D must be negative");
    long m = -q.d;
    if (!is_squarefree(m)) throw Error("quad_to_cyc: D must be square-free");
    if (mod(q.d, 4) != 1)
        throw Error("quad_to_cyc: D must be 1 mod 4 (conductor would exceed |D|)");
    if (q.b == 0) return CycValue(q.a);
    // sqrt(D) as a product of quadratic Gauss sums over the primes of |D|:
    // g_p = sum_r (r|p) zeta_p^r satisfies g_p^2 = (-1)^((p-1)/2) p.
    CycValue root(Rat(1));
    for (long p : prime_factors(m)) {
        CycValue g;
        for (long r = 1; r < p; ++r) {
            // Euler's criterion for the Legendre symbol
            long sym = 1, base = r % p, exp = (p - 1) / 2, acc = 1;
            while (exp) {
                if (exp & 1) acc = (acc * base) % p;
                base = (base * base) % p;
                exp >>= 1;
            }
            sym = (acc == 1) ? 1 : -1;
            g += CycValue::zeta(p, r) * CycValue(Rat(sym));
        }
        root *= g;
    }
    // root^2 = prod (+-p) which may differ from D by a sign when several
    // primes p = 1 mod 4 are involved; the minimal-polynomial check below
    // guards the convention.
    CycValue value = CycValue(q.a) + CycValue(q.b) * root;
    CycValue check = value * value - CycValue(Rat(2) * q.a) * value +
                     CycValue(q.a * q.a - q.b * q.b * Rat(q.d));
    if (!check.is_zero())
        throw Error("quad_to_cyc: Gauss-sum square has the wrong sign for D");
    return value;
}

std::map<long, Rat> CycValue::coords_at(long n) const {
    if (n % conductor_ != 0) throw Error("coords_at: conductor does not divide n");
    if (n == 1) return coeffs_;
    CycValue v = lifted(n);
    for (long p : prime_factors(n)) v.reduce_prime(p);
    for (auto it = v.coeffs_.begin(); it != v.coeffs_.end();) {
        if (it->second == 0) it = v.coeffs_.erase(it);
        else ++it;
    }
    return v.coeffs_;
}

std::vector<Rat> expand_primitive_basis(const CycValue& x, long n) {
    if (!is_prime(n)) throw Error("expand_primitive_basis: n must be prime");
    if (n % x.conductor() != 0)
        throw Error("expand_primitive_basis: conductor does not divide n");
    std::vector<Rat> out(static_cast<std::size_t>(n - 1), Rat(0));
    if (x.is_rational()) {
        // r = -r*(zeta + ... + zeta^(n-1))
        Rat r = x.as_rational();
        for (auto& c : out) c = -r;
        return out;
    }
    for (const auto& [e, c] : x.coeffs()) out[static_cast<std::size_t>(e - 1)] = c;
    return out;
}

std::string CycValue::str() const {
    if (is_rational()) return coeffs_.empty() ? "0" : rat_str(coeffs_.at(0));
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        os << rat_str(c) << "*z" << conductor_ << "^" << e;
    }
    return os.str();
}

}  // namespace gkcert
