#include "gkcert/primegraph.hpp"

#include <functional>
#include <map>
#include <sstream>

namespace gkcert {

PrimeGraph build_graph(const OrderList& orders) {
    orders.validate();
    PrimeGraph g;
    for (long o : orders.element_orders) {
        auto ps = prime_factors(o);
        for (long p : ps) g.vertices.insert(p);
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (std::size_t j = i + 1; j < ps.size(); ++j)
                g.edges.insert({ps[i], ps[j]});
    }
    return g;
}

std::vector<std::set<long>> components(const PrimeGraph& g) {
    std::map<long, long> rep;
    for (long v : g.vertices) rep[v] = v;
    std::function<long(long)> find = [&](long v) {
        while (rep[v] != v) v = rep[v] = rep[rep[v]];
        return v;
    };
    for (const auto& [p, q] : g.edges) {
        if (!g.vertices.count(p) || !g.vertices.count(q))
            throw Error("prime graph edge endpoint is not a vertex");
        rep[find(p)] = find(q);
    }
    std::map<long, std::set<long>> groups;
    for (long v : g.vertices) groups[find(v)].insert(v);
    std::map<long, std::set<long>> by_min;
    for (auto& [r, s] : groups) by_min[*s.begin()] = std::move(s);
    std::vector<std::set<long>> out;
    for (auto& [mn, s] : by_min) out.push_back(std::move(s));
    return out;
}

std::string to_dot(const PrimeGraph& g, const std::string& name) {
    std::ostringstream os;
    os << "graph \"" << name << "\" {\n";
    for (long v : g.vertices) os << "  \"" << v << "\";\n";
    for (const auto& [p, q] : g.edges) os << "  \"" << p << "\" -- \"" << q << "\";\n";
    os << "}\n";
    return os.str();
}

}  // namespace gkcert
