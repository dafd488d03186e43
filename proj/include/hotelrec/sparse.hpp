#pragma once

#include <cstdint>
#include <vector>

namespace hotelrec {

// CSR matrix of observed entries only. ALS never materializes the dense
// matrix; missing cells are absent, not zero.
struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::int64_t> row_ptr;  // rows + 1
    std::vector<int> col;
    std::vector<double> val;

    std::int64_t nnz() const { return std::int64_t(val.size()); }

    SparseMatrix transposed() const {
        SparseMatrix t;
        t.rows = cols;
        t.cols = rows;
        t.row_ptr.assign(std::size_t(cols) + 1, 0);
        for (int c : col) ++t.row_ptr[std::size_t(c) + 1];
        for (int i = 0; i < cols; ++i) t.row_ptr[std::size_t(i) + 1] += t.row_ptr[i];
        t.col.resize(val.size());
        t.val.resize(val.size());
        std::vector<std::int64_t> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
        for (int r = 0; r < rows; ++r) {
            for (std::int64_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
                const std::int64_t q = next[col[p]]++;
                t.col[q] = r;
                t.val[q] = val[p];
            }
        }
        return t;
    }
};

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

SparseMatrix sparse_from_triplets(int rows, int cols, std::vector<Triplet> triplets);

}  // namespace hotelrec
