#include "gkcert/matrix.hpp"

namespace gkcert {

AffineResult solve_affine(const RatMatrix& a, const std::vector<Rat>& b) {
    if (b.size() != a.rows()) throw Error("solve_affine: rhs size mismatch");
    auto res = rref(a.with_column(b));
    const std::size_t n = a.cols();
    // A pivot in the appended column is the inconsistency witness.
    for (std::size_t r = 0; r < res.rank; ++r) {
        if (res.pivots[r] == n) return Inconsistent{r};
    }
    AffineSolution sol;
    sol.particular.assign(n, Rat(0));
    std::vector<bool> is_pivot(n, false);
    for (std::size_t r = 0; r < res.rank; ++r) {
        is_pivot[res.pivots[r]] = true;
        sol.particular[res.pivots[r]] = res.rref.at(r, n);
    }
    for (std::size_t c = 0; c < n; ++c) {
        if (is_pivot[c]) continue;
        std::vector<Rat> v(n, Rat(0));
        v[c] = 1;
        for (std::size_t r = 0; r < res.rank; ++r) v[res.pivots[r]] = -res.rref.at(r, c);
        sol.nullspace.push_back(std::move(v));
    }
    return sol;
}

}  // namespace gkcert
