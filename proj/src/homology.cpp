#include "homology.hpp"

#include <bit>
#include <unordered_map>

#include "error.hpp"

namespace dms {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_((rows + 63) / 64), bits_(words_ * cols, 0) {}

bool BitMatrix::get(std::size_t r, std::size_t c) const {
  return (column(c)[r / 64] >> (r % 64)) & 1u;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
  std::uint64_t mask = std::uint64_t{1} << (r % 64);
  if (value)
    column(c)[r / 64] |= mask;
  else
    column(c)[r / 64] &= ~mask;
}

std::size_t BitMatrix::column_weight(std::size_t c) const {
  std::size_t w = 0;
  for (std::size_t i = 0; i < words_; ++i) w += std::popcount(column(c)[i]);
  return w;
}

namespace {
// Highest set row of a column, or -1 if the column is zero.
long lowest_one(const std::uint64_t* col, std::size_t words) {
  for (std::size_t i = words; i-- > 0;)
    if (col[i]) return static_cast<long>(i * 64 + 63 - std::countl_zero(col[i]));
  return -1;
}
}  // namespace

std::size_t rank_mod2(BitMatrix m) {
  // Column reduction, processing columns in order; pivots keyed by lowest one.
  std::unordered_map<long, std::size_t> pivot_of;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols_; ++c) {
    std::uint64_t* col = m.column(c);
    long low = lowest_one(col, m.words_);
    while (low >= 0) {
      auto it = pivot_of.find(low);
      if (it == pivot_of.end()) break;
      const std::uint64_t* other = m.column(it->second);
      for (std::size_t i = 0; i < m.words_; ++i) col[i] ^= other[i];
      low = lowest_one(col, m.words_);
    }
    if (low >= 0) {
      pivot_of.emplace(low, c);
      ++rank;
    }
  }
  return rank;
}

BitMatrix multiply_mod2(const BitMatrix& a, const BitMatrix& b) {
  BitMatrix out(a.rows_, b.cols_);
  for (std::size_t j = 0; j < b.cols_; ++j)
    for (std::size_t k = 0; k < b.rows_; ++k)
      if (b.get(k, j)) {
        std::uint64_t* dst = out.column(j);
        const std::uint64_t* src = a.column(k);
        for (std::size_t i = 0; i < out.words_; ++i) dst[i] ^= src[i];
      }
  return out;
}

BitMatrix boundary_matrix_mod2(const Complex& k, int p) {
  if (p < 1 || p > k.top_dim())
    throw Error(Errc::BadDimension, "boundary matrix needs 1 <= p <= " +
                                        std::to_string(k.top_dim()) + ", got " + std::to_string(p));
  const CellIndex row0 = k.begin(p - 1), col0 = k.begin(p);
  BitMatrix m(k.count(p - 1), k.count(p));
  for (CellIndex c = col0; c < k.end(p); ++c)
    for (CellIndex f : k.faces(c)) m.set(f - row0, c - col0);
  return m;
}

std::vector<int> betti_mod2(const Complex& k) {
  const int top = k.top_dim();
  if (top < 0) return {};
  std::vector<std::size_t> rank(top + 2, 0);  // rank[p] = rank of boundary map out of p-cells
  for (int p = 1; p <= top; ++p) rank[p] = rank_mod2(boundary_matrix_mod2(k, p));
  std::vector<int> b(top + 1);
  for (int p = 0; p <= top; ++p)
    b[p] = static_cast<int>(k.count(p) - rank[p] - rank[p + 1]);
  return b;
}

}  // namespace dms
