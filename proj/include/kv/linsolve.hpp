#ifndef KV_LINSOLVE_HPP
#define KV_LINSOLVE_HPP

#include <vector>

#include "kv/errors.hpp"

namespace kv {

/*
 * Exact dense Gaussian elimination over a field object K.  Pivot selection
 * prefers the entry with the smallest K.size_of() — over function fields this
 * is the expression-swell control; over finite fields every nonzero entry
 * has size 1 and the choice degenerates to partial pivoting.
 */
template <class K>
struct LinSolveResult {
    bool consistent = false;
    bool unique = false;
    int rank = 0;
    std::vector<typename K::Elt> solution; // meaningful when consistent && unique
};

template <class K>
LinSolveResult<K> linsolve(const K& F, std::vector<std::vector<typename K::Elt>> A,
                           std::vector<typename K::Elt> b) {
    const int m = int(A.size());
    const int n = m ? int(A[0].size()) : 0;
    for (auto& row : A)
        if (int(row.size()) != n) throw shape_error("ragged matrix");
    if (int(b.size()) != m) throw shape_error("rhs size mismatch");

    std::vector<int> pivot_col_of_row;
    std::vector<int> pivot_row_of_col(n, -1);
    int next_row = 0;
    for (int col = 0; col < n && next_row < m; ++col) {
        int best = -1, best_size = 0;
        for (int r = next_row; r < m; ++r) {
            if (F.is_zero(A[r][col])) continue;
            int s = F.size_of(A[r][col]);
            if (best < 0 || s < best_size) { best = r; best_size = s; }
        }
        if (best < 0) continue;
        std::swap(A[best], A[next_row]);
        std::swap(b[best], b[next_row]);
        auto inv = F.inv(A[next_row][col]);
        for (int j = col; j < n; ++j) A[next_row][j] = F.mul(A[next_row][j], inv);
        b[next_row] = F.mul(b[next_row], inv);
        for (int r = 0; r < m; ++r) {
            if (r == next_row || F.is_zero(A[r][col])) continue;
            auto f = A[r][col];
            for (int j = col; j < n; ++j)
                A[r][j] = F.sub(A[r][j], F.mul(f, A[next_row][j]));
            b[r] = F.sub(b[r], F.mul(f, b[next_row]));
        }
        pivot_row_of_col[col] = next_row;
        pivot_col_of_row.push_back(col);
        ++next_row;
    }

    LinSolveResult<K> res;
    res.rank = next_row;
    res.consistent = true;
    for (int r = next_row; r < m; ++r)
        if (!F.is_zero(b[r])) res.consistent = false;
    res.unique = (res.rank == n);
    if (res.consistent && res.unique) {
        res.solution.assign(n, F.zero());
        for (int col = 0; col < n; ++col)
            res.solution[col] = b[pivot_row_of_col[col]];
    }
    return res;
}

template <class K>
int matrix_rank(const K& F, std::vector<std::vector<typename K::Elt>> A) {
    std::vector<typename K::Elt> b(A.size(), F.zero());
    return linsolve(F, std::move(A), std::move(b)).rank;
}

} // namespace kv

#endif
