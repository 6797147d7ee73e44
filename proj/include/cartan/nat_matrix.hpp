#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cartan/error.hpp"

namespace cartan {

using Entry = std::uint32_t;

/// Rectangular matrix over the natural numbers, stored row-major.
///
/// Ordering compares (rows, cols, entries) so that sorting a set of equally
/// shaped matrices sorts them by their row-major entry sequence.
class NatMatrix {
 public:
  NatMatrix() = default;

  NatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

  NatMatrix(std::size_t rows, std::size_t cols, std::vector<Entry> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
      throw PreconditionError("NatMatrix: entry count " + std::to_string(entries_.size()) +
                              " does not match shape " + std::to_string(rows_) + "x" +
                              std::to_string(cols_));
  }

  /// Builds from nested rows; all rows must have equal length.
  static NatMatrix from_rows(const std::vector<std::vector<Entry>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    std::vector<Entry> flat;
    flat.reserve(r * c);
    for (const auto& row : rows) {
      if (row.size() != c) throw PreconditionError("NatMatrix: ragged rows");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return NatMatrix(r, c, std::move(flat));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  Entry operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  Entry& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

  std::span<const Entry> row(std::size_t i) const { return {entries_.data() + i * cols_, cols_}; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  Entry row_sum(std::size_t i) const {
    auto r = row(i);
    return std::accumulate(r.begin(), r.end(), Entry{0});
  }
  Entry col_sum(std::size_t j) const {
    Entry s = 0;
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, j);
    return s;
  }
  Entry total() const { return std::accumulate(entries_.begin(), entries_.end(), Entry{0}); }

  bool has_margins(Entry row_total, Entry col_total) const {
    for (std::size_t i = 0; i < rows_; ++i)
      if (row_sum(i) != row_total) return false;
    for (std::size_t j = 0; j < cols_; ++j)
      if (col_sum(j) != col_total) return false;
    return true;
  }

  NatMatrix transposed() const {
    NatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// B(row_perm[i], col_perm[j]) = A(i, j): row i of A becomes row row_perm[i] of B.
  NatMatrix permuted(std::span<const std::size_t> row_perm, std::span<const std::size_t> col_perm) const {
    if (row_perm.size() != rows_ || col_perm.size() != cols_)
      throw PreconditionError("NatMatrix::permuted: permutation length mismatch");
    NatMatrix b(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) b(row_perm[i], col_perm[j]) = (*this)(i, j);
    return b;
  }

  friend bool operator==(const NatMatrix&, const NatMatrix&) = default;
  friend auto operator<=>(const NatMatrix&, const NatMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Entry> entries_;
};

/// Matrix text format: "rows cols" on the first line, then one line per row.
inline void write_matrix(std::ostream& os, const NatMatrix& a) {
  os << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) os << ' ';
      os << a(i, j);
    }
    os << '\n';
  }
}

inline std::string to_text(const NatMatrix& a) {
  std::ostringstream os;
  write_matrix(os, a);
  return os.str();
}

inline NatMatrix read_matrix(std::istream& is) {
  long long r = -1, c = -1;
  if (!(is >> r >> c) || r < 0 || c < 0) throw ParseError("matrix text: expected \"rows cols\" header");
  std::vector<Entry> flat;
  flat.reserve(static_cast<std::size_t>(r * c));
  for (long long k = 0; k < r * c; ++k) {
    long long v = -1;
    if (!(is >> v)) throw ParseError("matrix text: expected " + std::to_string(r * c) + " entries");
    if (v < 0 || v > static_cast<long long>(UINT32_MAX)) throw ParseError("matrix text: entry out of range");
    flat.push_back(static_cast<Entry>(v));
  }
  return NatMatrix(static_cast<std::size_t>(r), static_cast<std::size_t>(c), std::move(flat));
}

inline NatMatrix parse_matrix(const std::string& text) {
  std::istringstream is(text);
  return read_matrix(is);
}

inline std::ostream& operator<<(std::ostream& os, const NatMatrix& a) {
  os << '[';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < a.cols(); ++j) os << (j ? "," : "") << a(i, j);
    os << ']';
  }
  return os << ']';
}

}  // namespace cartan
