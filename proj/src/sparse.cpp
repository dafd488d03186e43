#include "hotelrec/sparse.hpp"

#include <algorithm>

namespace hotelrec {

SparseMatrix sparse_from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        if (a.row != b.row) return a.row < b.row;
        return a.col < b.col;
    });
    SparseMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.row_ptr.assign(std::size_t(rows) + 1, 0);
    m.col.reserve(triplets.size());
    m.val.reserve(triplets.size());
    for (std::size_t i = 0; i < triplets.size(); ++i) {
        // duplicate (row, col) accumulate
        if (!m.col.empty() && i > 0 && triplets[i].row == triplets[i - 1].row &&
            triplets[i].col == triplets[i - 1].col) {
            m.val.back() += triplets[i].value;
            continue;
        }
        m.col.push_back(triplets[i].col);
        m.val.push_back(triplets[i].value);
        ++m.row_ptr[std::size_t(triplets[i].row) + 1];
    }
    for (int r = 0; r < rows; ++r) m.row_ptr[std::size_t(r) + 1] += m.row_ptr[r];
    return m;
}

}  // namespace hotelrec
