#pragma once

#include <cstdint>
#include <vector>

#include "complex.hpp"

namespace dms {

// Dense GF(2) matrix stored column by column as packed 64-bit words.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, bool value = true);
  std::size_t column_weight(std::size_t c) const;

  friend std::size_t rank_mod2(BitMatrix m);
  friend BitMatrix multiply_mod2(const BitMatrix& a, const BitMatrix& b);

 private:
  std::uint64_t* column(std::size_t c) { return bits_.data() + c * words_; }
  const std::uint64_t* column(std::size_t c) const { return bits_.data() + c * words_; }

  std::size_t rows_ = 0, cols_ = 0, words_ = 0;
  std::vector<std::uint64_t> bits_;
};

std::size_t rank_mod2(BitMatrix m);
BitMatrix multiply_mod2(const BitMatrix& a, const BitMatrix& b);

// Rows are (p-1)-cells, columns p-cells, both in id order.
BitMatrix boundary_matrix_mod2(const Complex& k, int p);

std::vector<int> betti_mod2(const Complex& k);

}  // namespace dms
