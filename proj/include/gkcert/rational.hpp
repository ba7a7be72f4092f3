#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace gkcert {

// Exact rational scalar used everywhere in the toolkit. mpq_class keeps
// values canonical (lowest terms, positive denominator).
using Rat = mpq_class;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline Rat parse_rat(const std::string& text) {
    if (text.empty()) throw Error("empty rational literal");
    std::string s = text;
    // mpq_class accepts "p/q" directly but aborts on malformed input,
    // so check the shape first.
    auto is_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        if (!is_int(s)) throw Error("bad rational literal: " + text);
    } else {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) throw Error("bad rational literal: " + text);
        if (mpz_class(den) == 0) throw Error("zero denominator: " + text);
    }
    Rat q(s);
    q.canonicalize();
    return q;
}

inline std::string rat_str(const Rat& q) {
    return q.get_str();
}

inline bool rat_is_integer(const Rat& q) {
    return q.get_den() == 1;
}

}  // namespace gkcert
