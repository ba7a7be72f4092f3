#pragma once

#include <map>
#include <sstream>
#include <string>

#include "gkcert/cyclotomic.hpp"
#include "gkcert/rational.hpp"

namespace gkcert {

// A linear form  sum coeffs[p] * p  +  constant  in named parameters.
// T is the coefficient scalar (Rat for solved systems, CycValue while
// character values are still in play).
template <class T>
struct LinForm {
    std::map<std::string, T> coeffs;
    T constant{};

    LinForm() = default;
    explicit LinForm(const T& c) : constant(c) {}
    static LinForm param(const std::string& name, const T& coeff) {
        LinForm f;
        f.coeffs[name] = coeff;
        f.normalize();
        return f;
    }

    void normalize() {
        for (auto it = coeffs.begin(); it != coeffs.end();) {
            if (is_zero_value(it->second)) it = coeffs.erase(it);
            else ++it;
        }
    }

    bool is_constant() const { return coeffs.empty(); }
    bool is_zero() const { return coeffs.empty() && is_zero_value(constant); }

    LinForm operator+(const LinForm& o) const {
        LinForm f(*this);
        f.constant = f.constant + o.constant;
        for (const auto& [k, v] : o.coeffs) {
            auto it = f.coeffs.find(k);
            if (it == f.coeffs.end()) f.coeffs[k] = v;
            else it->second = it->second + v;
        }
        f.normalize();
        return f;
    }
    LinForm operator-() const {
        LinForm f(*this);
        f.constant = negate(f.constant);
        for (auto& [k, v] : f.coeffs) v = negate(v);
        return f;
    }
    LinForm operator-(const LinForm& o) const { return *this + (-o); }
    LinForm operator*(const T& s) const {
        LinForm f(*this);
        f.constant = f.constant * s;
        for (auto& [k, v] : f.coeffs) v = v * s;
        f.normalize();
        return f;
    }
    bool operator==(const LinForm& o) const {
        return constant == o.constant && coeffs == o.coeffs;
    }
    bool operator!=(const LinForm& o) const { return !(*this == o); }

    T coeff(const std::string& name) const {
        auto it = coeffs.find(name);
        return it == coeffs.end() ? T{} : it->second;
    }

    // substitute a parameter by another form (e.g. k3 := k2)
    LinForm substituted(const std::string& name, const LinForm& repl) const {
        auto it = coeffs.find(name);
        if (it == coeffs.end()) return *this;
        LinForm f(*this);
        T c = it->second;
        f.coeffs.erase(name);
        return f + repl * c;
    }

    T eval(const std::map<std::string, T>& values) const {
        T acc = constant;
        for (const auto& [k, v] : coeffs) {
            auto it = values.find(k);
            if (it == values.end()) throw Error("unbound parameter: " + k);
            acc = acc + v * it->second;
        }
        return acc;
    }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, v] : coeffs) {
            if (!first) os << " + ";
            first = false;
            os << scalar_str(v) << "*" << k;
        }
        if (!is_zero_value(constant) || first) {
            if (!first) os << " + ";
            os << scalar_str(constant);
        }
        return os.str();
    }

private:
    static bool is_zero_value(const Rat& r) { return r == 0; }
    static bool is_zero_value(const CycValue& c) { return c.is_zero(); }
    static Rat negate(const Rat& r) { return -r; }
    static CycValue negate(const CycValue& c) { return -c; }
    static std::string scalar_str(const Rat& r) { return rat_str(r); }
    static std::string scalar_str(const CycValue& c) { return c.str(); }
};

using LinRat = LinForm<Rat>;
using LinCyc = LinForm<CycValue>;

inline LinRat lin_rat_of(const LinCyc& f) {
    LinRat out;
    out.constant = f.constant.as_rational();
    for (const auto& [k, v] : f.coeffs) out.coeffs[k] = v.as_rational();
    out.normalize();
    return out;
}

inline LinCyc lin_cyc_of(const LinRat& f) {
    LinCyc out;
    out.constant = CycValue(f.constant);
    for (const auto& [k, v] : f.coeffs) out.coeffs[k] = CycValue(v);
    out.normalize();
    return out;
}

}  // namespace gkcert
