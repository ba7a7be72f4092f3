#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gkcert/chartab.hpp"

namespace gkcert {

// Gruenberg-Kegel graph: vertices are primes dividing some element order,
// edge {p,q} iff an element of order divisible by p*q exists.
struct PrimeGraph {
    std::set<long> vertices;
    std::set<std::pair<long, long>> edges;  // p < q

    bool operator==(const PrimeGraph& o) const {
        return vertices == o.vertices && edges == o.edges;
    }
};

PrimeGraph build_graph(const OrderList& orders);

// connected components, each sorted, ordered by minimum element
std::vector<std::set<long>> components(const PrimeGraph& g);

inline bool graph_equal(const PrimeGraph& a, const PrimeGraph& b) { return a == b; }

std::string to_dot(const PrimeGraph& g, const std::string& name);

}  // namespace gkcert
