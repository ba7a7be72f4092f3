#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "gkcert/cyclotomic.hpp"
#include "gkcert/rational.hpp"

namespace gkcert {

namespace detail {
inline bool entry_is_zero(const Rat& r) { return r == 0; }
inline bool entry_is_zero(const CycValue& c) { return c.is_zero(); }
inline Rat entry_inverse(const Rat& r) { return Rat(1) / r; }
inline CycValue entry_inverse(const CycValue& c) { return c.inverse(); }
}  // namespace detail

// Dense matrix over an exact field (Rat or CycValue).  Sizes in this toolkit
// top out at 9x14, so no sparsity games.
template <class F>
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = F(Rat(1));
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    F& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const F& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    std::vector<F> row(std::size_t r) const {
        return std::vector<F>(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
    }

    Mat with_column(const std::vector<F>& col) const {
        if (col.size() != rows_) throw Error("with_column: size mismatch");
        Mat m(rows_, cols_ + 1);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) m.at(r, c) = at(r, c);
            m.at(r, cols_) = col[r];
        }
        return m;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<F> data_;
};

using RatMatrix = Mat<Rat>;
using CycMatrix = Mat<CycValue>;

template <class F>
struct RrefResult {
    Mat<F> rref;
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
};

// Canonical reduced row echelon form: leading ones, zeros above and below
// every pivot, zero rows last.  First nonzero entry is the pivot (exact
// arithmetic, so no magnitude heuristics), which makes the output
// deterministic and directly comparable against stored matrices.
template <class F>
RrefResult<F> rref(const Mat<F>& m) {
    RrefResult<F> out{m, {}, 0};
    Mat<F>& a = out.rref;
    std::size_t pr = 0;
    for (std::size_t c = 0; c < a.cols() && pr < a.rows(); ++c) {
        std::size_t sel = pr;
        while (sel < a.rows() && detail::entry_is_zero(a.at(sel, c))) ++sel;
        if (sel == a.rows()) continue;
        if (sel != pr) {
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a.at(sel, j), a.at(pr, j));
        }
        F inv = detail::entry_inverse(a.at(pr, c));
        for (std::size_t j = c; j < a.cols(); ++j) a.at(pr, j) = a.at(pr, j) * inv;
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (r == pr || detail::entry_is_zero(a.at(r, c))) continue;
            F f = a.at(r, c);
            for (std::size_t j = c; j < a.cols(); ++j)
                a.at(r, j) = a.at(r, j) - f * a.at(pr, j);
        }
        out.pivots.push_back(c);
        ++pr;
    }
    out.rank = out.pivots.size();
    return out;
}

template <class F>
bool is_zero_row(const Mat<F>& m, std::size_t r) {
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!detail::entry_is_zero(m.at(r, c))) return false;
    return true;
}

// Row spaces coincide iff the canonical RREFs agree after dropping zero rows.
template <class F>
bool row_space_equal(const Mat<F>& x, const Mat<F>& y) {
    if (x.cols() != y.cols()) throw Error("row_space_equal: column count mismatch");
    auto rx = rref(x), ry = rref(y);
    if (rx.rank != ry.rank) return false;
    for (std::size_t r = 0; r < rx.rank; ++r)
        if (rx.rref.row(r) != ry.rref.row(r)) return false;
    return true;
}

struct AffineSolution {
    std::vector<Rat> particular;
    std::vector<std::vector<Rat>> nullspace;
};
struct Inconsistent {
    std::size_t witness_row;  // row of RREF([a|b]) of the form (0...0 | nonzero)
};
using AffineResult = std::variant<AffineSolution, Inconsistent>;

// Exact parametrisation of {x : a x = b}.
AffineResult solve_affine(const RatMatrix& a, const std::vector<Rat>& b);

// Cast helpers between the rational and cyclotomic worlds.
inline CycMatrix cyc_matrix_of(const RatMatrix& m) {
    CycMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out.at(r, c) = CycValue(m.at(r, c));
    return out;
}

// Throws if any entry is irrational.
inline RatMatrix rat_matrix_of(const CycMatrix& m) {
    RatMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out.at(r, c) = m.at(r, c).as_rational();
    return out;
}

}  // namespace gkcert
