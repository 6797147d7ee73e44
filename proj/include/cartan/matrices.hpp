#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cartan/error.hpp"
#include "cartan/nat_matrix.hpp"
#include "cartan/partitions.hpp"

namespace cartan {

/// Margins of M(a,b,c,d): a x c matrices with row sums b and column sums d.
class MarginSpec {
 public:
  MarginSpec(std::size_t a, Entry b, std::size_t c, Entry d) : a_(a), b_(b), c_(c), d_(d) {
    if (a == 0 || c == 0) throw PreconditionError("MarginSpec: row and column counts must be positive");
    if (static_cast<std::uint64_t>(a) * b != static_cast<std::uint64_t>(c) * d)
      throw PreconditionError("MarginSpec: a*b != c*d, M(" + std::to_string(a) + "," + std::to_string(b) + "," +
                              std::to_string(c) + "," + std::to_string(d) + ") is empty");
  }

  std::size_t a() const noexcept { return a_; }
  Entry b() const noexcept { return b_; }
  std::size_t c() const noexcept { return c_; }
  Entry d() const noexcept { return d_; }

  bool contains(const NatMatrix& m) const {
    return m.rows() == a_ && m.cols() == c_ && m.has_margins(b_, d_);
  }

  MarginSpec transposed() const { return MarginSpec(c_, d_, a_, b_); }

  void check_guards(const Limits& limits) const {
    limits.check("a*c", a_ * c_, limits.max_cells);
    limits.check("b", b_, limits.max_line_sum);
  }

  friend bool operator==(const MarginSpec&, const MarginSpec&) = default;

 private:
  std::size_t a_;
  Entry b_;
  std::size_t c_;
  Entry d_;
};

/// Visits every matrix of M(a,b,c,d) once, in row-major lexicographic order.
/// Returns the number of matrices visited.
template <typename Visitor>
std::uint64_t enumerate_margin_matrices(const MarginSpec& spec, Visitor&& visit, const Limits& limits = {}) {
  spec.check_guards(limits);
  const std::size_t rows = spec.a();
  const std::size_t cols = spec.c();
  NatMatrix current(rows, cols);
  std::vector<Entry> col_left(cols, spec.d());
  std::uint64_t count = 0;

  // Cell-by-cell backtracking. `row_left` is what the current row still needs;
  // the lower bound on each entry keeps the row completable by later columns.
  auto fill = [&](auto&& self, std::size_t cell, Entry row_left) -> void {
    if (cell == rows * cols) {
      ++count;
      visit(static_cast<const NatMatrix&>(current));
      return;
    }
    const std::size_t i = cell / cols;
    const std::size_t j = cell % cols;
    Entry later = 0;
    for (std::size_t jj = j + 1; jj < cols; ++jj) later += col_left[jj];
    const Entry lo = row_left > later ? row_left - later : 0;
    const Entry hi = std::min(row_left, col_left[j]);
    for (Entry v = lo; v <= hi; ++v) {
      current(i, j) = v;
      col_left[j] -= v;
      const bool row_done = (j + 1 == cols);
      if (!row_done || row_left == v) self(self, cell + 1, row_done ? spec.b() : row_left - v);
      col_left[j] += v;
    }
    current(i, j) = 0;
  };
  fill(fill, 0, spec.b());
  return count;
}

namespace detail {

// One node of the canonical-form search: the rows not yet placed and the
// ordered column cells (columns inside a cell are still interchangeable).
struct CanonState {
  std::vector<std::size_t> remaining;
  std::vector<std::vector<std::size_t>> cells;
};

// Image of `row` under the best column order compatible with `cells`:
// each cell's values sorted ascending, cells concatenated in order.
inline void row_image(const NatMatrix& a, std::size_t row, const std::vector<std::vector<std::size_t>>& cells,
                      std::vector<Entry>& out) {
  out.clear();
  for (const auto& cell : cells) {
    const std::size_t start = out.size();
    for (std::size_t col : cell) out.push_back(a(row, col));
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(start), out.end());
  }
}

inline std::vector<std::vector<std::size_t>> split_cells(const NatMatrix& a, std::size_t row,
                                                         const std::vector<std::vector<std::size_t>>& cells) {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(cells.size());
  for (const auto& cell : cells) {
    std::vector<std::size_t> sorted = cell;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [&](std::size_t x, std::size_t y) { return a(row, x) < a(row, y); });
    std::size_t k = 0;
    while (k < sorted.size()) {
      std::size_t e = k;
      while (e < sorted.size() && a(row, sorted[e]) == a(row, sorted[k])) ++e;
      out.emplace_back(sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.begin() + static_cast<std::ptrdiff_t>(e));
      k = e;
    }
  }
  return out;
}

// Key identifying a search state up to the symmetries still available to it
// (any permutation of remaining rows, any permutation inside a cell). Equal keys
// imply equivalent futures; unequal keys may still be equivalent, which only
// costs time.
inline std::vector<Entry> state_key(const NatMatrix& a, const CanonState& st) {
  const std::size_t r = st.remaining.size();
  std::vector<std::size_t> col_order;
  std::vector<std::size_t> cell_end;
  for (const auto& cell : st.cells) {
    col_order.insert(col_order.end(), cell.begin(), cell.end());
    cell_end.push_back(col_order.size());
  }
  const std::size_t c = col_order.size();
  std::vector<std::vector<Entry>> m(r, std::vector<Entry>(c));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m[i][j] = a(st.remaining[i], col_order[j]);

  for (std::size_t pass = 0; pass < r + c + 2; ++pass) {
    bool changed = false;
    if (!std::is_sorted(m.begin(), m.end())) {
      std::sort(m.begin(), m.end());
      changed = true;
    }
    // Sort columns within each cell by their column vector.
    std::size_t start = 0;
    for (std::size_t end : cell_end) {
      std::vector<std::pair<std::vector<Entry>, std::size_t>> colv;
      for (std::size_t j = start; j < end; ++j) {
        std::vector<Entry> v(r);
        for (std::size_t i = 0; i < r; ++i) v[i] = m[i][j];
        colv.emplace_back(std::move(v), j);
      }
      if (!std::is_sorted(colv.begin(), colv.end())) {
        std::sort(colv.begin(), colv.end());
        changed = true;
        for (std::size_t t = 0; t < colv.size(); ++t)
          for (std::size_t i = 0; i < r; ++i) m[i][start + t] = colv[t].first[i];
      }
      start = end;
    }
    if (!changed) break;
  }

  std::vector<Entry> key;
  key.reserve(cell_end.size() + 1 + r * c);
  key.push_back(static_cast<Entry>(cell_end.size()));
  for (std::size_t e : cell_end) key.push_back(static_cast<Entry>(e));
  for (const auto& row : m) key.insert(key.end(), row.begin(), row.end());
  return key;
}

// Level-synchronous search for the lexicographically smallest row-major
// sequence over Sym(rows) x Sym(cols). If `target` is given, stops early and
// returns false as soon as some level beats the target's row.
inline bool canonical_search(const NatMatrix& a, const Limits& limits, std::vector<Entry>& result,
                             const NatMatrix* target = nullptr) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  result.clear();
  result.reserve(rows * cols);

  CanonState root;
  root.remaining.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) root.remaining[i] = i;
  root.cells.emplace_back();
  for (std::size_t j = 0; j < cols; ++j) root.cells.back().push_back(j);

  std::vector<CanonState> states{std::move(root)};
  std::vector<Entry> best, img;
  std::size_t nodes = 0;

  for (std::size_t level = 0; level < rows; ++level) {
    bool have_best = false;
    std::vector<CanonState> next;
    for (const auto& st : states) {
      for (std::size_t idx = 0; idx < st.remaining.size(); ++idx) {
        const std::size_t r = st.remaining[idx];
        bool duplicate = false;
        for (std::size_t prev = 0; prev < idx && !duplicate; ++prev) {
          auto pr = a.row(st.remaining[prev]);
          auto cr = a.row(r);
          duplicate = std::equal(pr.begin(), pr.end(), cr.begin());
        }
        if (duplicate) continue;
        row_image(a, r, st.cells, img);
        if (have_best) {
          const auto cmp = std::lexicographical_compare_three_way(img.begin(), img.end(), best.begin(), best.end());
          if (cmp > 0) continue;
          if (cmp < 0) next.clear();
        }
        if (!have_best || img != best) {
          best = img;
          have_best = true;
        }
        CanonState child;
        child.remaining = st.remaining;
        child.remaining.erase(child.remaining.begin() + static_cast<std::ptrdiff_t>(idx));
        child.cells = split_cells(a, r, st.cells);
        next.push_back(std::move(child));
        ++nodes;
        limits.check("canonical search nodes", nodes, limits.search_node_budget);
      }
    }

    if (target != nullptr) {
      auto trow = target->row(level);
      const auto cmp = std::lexicographical_compare_three_way(best.begin(), best.end(), trow.begin(), trow.end());
      if (cmp < 0) return false;
    }
    result.insert(result.end(), best.begin(), best.end());

    if (level + 1 < rows && next.size() > 1) {
      std::map<std::vector<Entry>, std::size_t> seen;
      std::vector<CanonState> unique;
      for (auto& st : next) {
        if (seen.emplace(state_key(a, st), unique.size()).second) unique.push_back(std::move(st));
      }
      next = std::move(unique);
    }
    states = std::move(next);
  }
  return true;
}

}  // namespace detail

/// Lexicographically smallest row-major form of `a` over all row and column
/// permutations, and over transposition as well when `allow_transpose` and `a`
/// is square. Non-square matrices silently skip the transpose move.
inline NatMatrix canonical_form(const NatMatrix& a, bool allow_transpose, const Limits& limits = {}) {
  if (a.empty()) throw PreconditionError("canonical_form: matrix must be non-empty");
  std::vector<Entry> seq;
  detail::canonical_search(a, limits, seq);
  NatMatrix best(a.rows(), a.cols(), std::move(seq));
  if (allow_transpose && a.is_square()) {
    std::vector<Entry> tseq;
    detail::canonical_search(a.transposed(), limits, tseq);
    NatMatrix alt(a.rows(), a.cols(), std::move(tseq));
    if (alt < best) best = std::move(alt);
  }
  return best;
}

/// True when `a` equals its own canonical form without the transpose move.
inline bool is_canonical(const NatMatrix& a, const Limits& limits = {}) {
  if (a.empty()) return true;
  std::vector<Entry> seq;
  return detail::canonical_search(a, limits, seq, &a) && seq == a.entries();
}

/// Congruence: equal up to row and column permutations, or (square only) up to
/// those composed with transposition. Shape mismatch is simply `false`.
inline bool are_congruent(const NatMatrix& a, const NatMatrix& b, const Limits& limits = {}) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.empty()) return true;
  if (a.total() != b.total()) return false;
  return canonical_form(a, true, limits) == canonical_form(b, true, limits);
}

/// Hashable/sortable representative of a congruence class.
struct CongruenceKey {
  NatMatrix canonical;
  bool transpose_allowed = true;

  friend bool operator==(const CongruenceKey&, const CongruenceKey&) = default;
  friend auto operator<=>(const CongruenceKey&, const CongruenceKey&) = default;
};

/// One representative per congruence class of M(a,b,c,d), sorted by canonical
/// row-major order.
///
/// Orderly generation: matrices are built one row at a time and a partial
/// matrix survives only if it is its own canonical form. Lexicographically
/// minimal forms are prefix-closed (the first k rows of a canonical matrix are
/// the minimum over all k-row selections), so every class is reached exactly
/// once through the prefixes of its canonical form.
inline std::vector<CongruenceKey> enumerate_congruence_classes(const MarginSpec& spec, bool allow_transpose = true,
                                                               const Limits& limits = {}) {
  spec.check_guards(limits);
  const std::size_t rows = spec.a();
  const std::size_t cols = spec.c();

  struct Prefix {
    std::vector<Entry> entries;
    std::vector<Entry> col_left;
  };
  std::vector<Prefix> level{Prefix{{}, std::vector<Entry>(cols, spec.d())}};

  for (std::size_t k = 0; k < rows; ++k) {
    std::vector<Prefix> next;
    const bool last = (k + 1 == rows);
    for (const auto& pre : level) {
      const Entry* prev = k == 0 ? nullptr : pre.entries.data() + (k - 1) * cols;
      std::vector<Entry> row(cols, 0);

      auto accept = [&]() {
        Prefix child{pre.entries, pre.col_left};
        child.entries.insert(child.entries.end(), row.begin(), row.end());
        for (std::size_t j = 0; j < cols; ++j) child.col_left[j] -= row[j];
        NatMatrix partial(k + 1, cols, child.entries);
        if (is_canonical(partial, limits)) next.push_back(std::move(child));
      };

      if (last) {
        row = pre.col_left;
        Entry s = 0;
        for (Entry v : row) s += v;
        if (s == spec.b() && (prev == nullptr || !std::lexicographical_compare(row.begin(), row.end(), prev, prev + cols)))
          accept();
        continue;
      }

      // Rows of a canonical matrix are non-decreasing, so only candidates
      // lexicographically >= the previous row are generated.
      auto gen = [&](auto&& self, std::size_t j, Entry left, bool tight) -> void {
        if (j == cols) {
          if (left == 0) accept();
          return;
        }
        Entry later = 0;
        for (std::size_t jj = j + 1; jj < cols; ++jj) later += pre.col_left[jj];
        Entry lo = left > later ? left - later : 0;
        if (tight && prev != nullptr) lo = std::max(lo, prev[j]);
        const Entry hi = std::min(left, pre.col_left[j]);
        for (Entry v = lo; v <= hi; ++v) {
          row[j] = v;
          self(self, j + 1, left - v, tight && prev != nullptr && v == prev[j]);
        }
        row[j] = 0;
      };
      gen(gen, 0, spec.b(), true);
    }
    level = std::move(next);
  }

  std::vector<CongruenceKey> out;
  for (auto& pre : level) {
    NatMatrix m(rows, cols, std::move(pre.entries));
    if (allow_transpose && m.is_square()) {
      if (canonical_form(m.transposed(), false, limits) < m) continue;
    }
    out.push_back(CongruenceKey{std::move(m), allow_transpose});
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Block sizes of the block-diagonal normal form of a matrix in M(2o,2,2o,2),
/// sorted ascending.
struct BlockProfile {
  std::vector<std::size_t> sizes;

  std::size_t total() const {
    std::size_t s = 0;
    for (auto v : sizes) s += v;
    return s;
  }
  friend bool operator==(const BlockProfile&, const BlockProfile&) = default;
  friend auto operator<=>(const BlockProfile&, const BlockProfile&) = default;
};

/// Reads off the normal form's blocks: a 2-entry closes a 1x1 block; otherwise
/// the chain of 1-entries A11 = A12 = A21 = A23 = ... is followed until it
/// returns to the starting column, closing a k x k block after k rows.
inline BlockProfile block_normal_form(const NatMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0 || !a.is_square() || n % 2 != 0 || !a.has_margins(2, 2))
    throw PreconditionError("block_normal_form: expected a 2o x 2o matrix with all row and column sums 2");

  std::vector<bool> row_used(n, false);
  BlockProfile profile;
  for (std::size_t start = 0; start < n; ++start) {
    if (row_used[start]) continue;
    std::size_t first_col = 0;
    while (a(start, first_col) == 0) ++first_col;
    row_used[start] = true;
    if (a(start, first_col) == 2) {
      profile.sizes.push_back(1);
      continue;
    }
    std::size_t size = 1;
    std::size_t row = start;
    std::size_t entered = first_col;
    for (;;) {
      std::size_t exit = 0;
      while (exit == entered || a(row, exit) != 1) ++exit;
      if (exit == first_col) break;
      std::size_t below = 0;
      while (below == row || a(below, exit) != 1) ++below;
      row = below;
      row_used[row] = true;
      entered = exit;
      ++size;
    }
    profile.sizes.push_back(size);
  }
  std::sort(profile.sizes.begin(), profile.sizes.end());
  return profile;
}

/// Number of 2-entries of a matrix in M(2,n,n,2): a complete congruence
/// invariant there, always even.
inline std::size_t two_entry_invariant(const NatMatrix& a) {
  const std::size_t n = a.cols();
  if (a.rows() != 2 || n == 0 || !a.has_margins(static_cast<Entry>(n), 2))
    throw PreconditionError("two_entry_invariant: expected a 2 x n matrix with row sums n and column sums 2");
  return static_cast<std::size_t>(std::count(a.entries().begin(), a.entries().end(), Entry{2}));
}

}  // namespace cartan
