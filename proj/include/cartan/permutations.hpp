#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cartan/error.hpp"
#include "cartan/matrices.hpp"
#include "cartan/nat_matrix.hpp"

namespace cartan {

/// Dimension drop parameters (m, n, o), all >= 1.
struct Params {
  std::size_t m = 1;
  std::size_t n = 1;
  std::size_t o = 1;

  Params() = default;
  Params(std::size_t m_, std::size_t n_, std::size_t o_) : m(m_), n(n_), o(o_) {
    if (m == 0 || n == 0 || o == 0) throw PreconditionError("Params: m, n, o must all be >= 1");
  }

  std::size_t points() const noexcept { return m * n * o; }

  /// Flat 0-based index of the 0-based triple (i, j, k); k varies fastest.
  std::size_t flat(std::size_t i, std::size_t j, std::size_t k) const noexcept { return (i * n + j) * o + k; }

  struct Triple {
    std::size_t i, j, k;
  };
  Triple triple(std::size_t f) const noexcept { return {f / (n * o), (f / o) % n, f % o}; }

  /// Margins M(mo, n, no, m) of the reduced matrices.
  MarginSpec margin_spec() const {
    return MarginSpec(m * o, static_cast<Entry>(n), n * o, static_cast<Entry>(m));
  }

  friend bool operator==(const Params&, const Params&) = default;
  friend auto operator<=>(const Params&, const Params&) = default;
};

/// Bijection of m x n x o stored as images of flat indices.
class TriplePermutation {
 public:
  TriplePermutation(Params params, std::vector<std::uint32_t> images) : params_(params), images_(std::move(images)) {
    const std::size_t size = params_.points();
    if (images_.size() != size)
      throw PreconditionError("TriplePermutation: expected " + std::to_string(size) + " images");
    std::vector<bool> hit(size, false);
    for (auto v : images_) {
      if (v >= size || hit[v]) throw PreconditionError("TriplePermutation: images are not a bijection");
      hit[v] = true;
    }
  }

  static TriplePermutation identity(Params params) {
    std::vector<std::uint32_t> img(params.points());
    std::iota(img.begin(), img.end(), 0u);
    return TriplePermutation(params, std::move(img), Trusted{});
  }

  /// The flip (i, j, k) -> (j, i, k); requires m == n.
  static TriplePermutation flip(Params params) {
    if (params.m != params.n) throw PreconditionError("flip: requires m == n");
    std::vector<std::uint32_t> img(params.points());
    for (std::size_t f = 0; f < img.size(); ++f) {
      const auto t = params.triple(f);
      img[f] = static_cast<std::uint32_t>(params.flat(t.j, t.i, t.k));
    }
    return TriplePermutation(params, std::move(img), Trusted{});
  }

  const Params& params() const noexcept { return params_; }
  const std::vector<std::uint32_t>& images() const noexcept { return images_; }
  std::size_t size() const noexcept { return images_.size(); }
  std::uint32_t operator()(std::size_t f) const { return images_[f]; }

  bool is_identity() const {
    for (std::size_t f = 0; f < images_.size(); ++f)
      if (images_[f] != f) return false;
    return true;
  }

  friend bool operator==(const TriplePermutation& x, const TriplePermutation& y) {
    return x.params_ == y.params_ && x.images_ == y.images_;
  }
  friend auto operator<=>(const TriplePermutation& x, const TriplePermutation& y) {
    if (auto c = x.params_ <=> y.params_; c != 0) return c;
    return x.images_ <=> y.images_;
  }

 private:
  struct Trusted {};
  TriplePermutation(Params params, std::vector<std::uint32_t> images, Trusted)
      : params_(params), images_(std::move(images)) {}

  friend TriplePermutation compose(const TriplePermutation&, const TriplePermutation&);
  friend TriplePermutation invert(const TriplePermutation&);

  Params params_;
  std::vector<std::uint32_t> images_;
};

/// (sigma o tau)(x) = sigma(tau(x)): tau is applied first.
inline TriplePermutation compose(const TriplePermutation& sigma, const TriplePermutation& tau) {
  if (sigma.params() != tau.params()) throw PreconditionError("compose: params mismatch");
  std::vector<std::uint32_t> img(tau.size());
  for (std::size_t f = 0; f < img.size(); ++f) img[f] = sigma(tau(f));
  return TriplePermutation(sigma.params(), std::move(img), TriplePermutation::Trusted{});
}

inline TriplePermutation invert(const TriplePermutation& sigma) {
  std::vector<std::uint32_t> img(sigma.size());
  for (std::size_t f = 0; f < img.size(); ++f) img[sigma(f)] = static_cast<std::uint32_t>(f);
  return TriplePermutation(sigma.params(), std::move(img), TriplePermutation::Trusted{});
}

/// Reduced matrix: entry ((i,k),(j',k')) counts the sources (i',j',k') whose
/// image lies in the fibre (i, *, k). Rows are indexed by i*o + k, columns by
/// j'*o + k'. The result lies in M(mo, n, no, m).
inline NatMatrix reduced_matrix(const TriplePermutation& sigma) {
  const Params& p = sigma.params();
  NatMatrix a(p.m * p.o, p.n * p.o);
  for (std::size_t src = 0; src < sigma.size(); ++src) {
    const auto s = p.triple(src);
    const auto t = p.triple(sigma(src));
    a(t.i * p.o + t.k, s.j * p.o + s.k) += 1;
  }
  return a;
}

/// Builds a permutation whose reduced matrix is `a` by the block construction:
/// block ((i,k),(j',k')) holds a partial identity of rank A_{(i,k),(j',k')},
/// offset by the entries before it in its block column (r, on the source
/// coordinate i') and in its block row (s, on the target coordinate j).
inline TriplePermutation lift_matrix(const NatMatrix& a, Params params) {
  const std::size_t rows = params.m * params.o;
  const std::size_t cols = params.n * params.o;
  if (a.rows() != rows || a.cols() != cols || !a.has_margins(static_cast<Entry>(params.n), static_cast<Entry>(params.m)))
    throw PreconditionError("lift_matrix: matrix is not in M(mo, n, no, m)");

  std::vector<std::uint32_t> img(params.points(), 0);
  std::vector<Entry> col_offset(cols, 0);  // r: running sum down each block column
  for (std::size_t row = 0; row < rows; ++row) {
    const std::size_t i = row / params.o;
    const std::size_t k = row % params.o;
    Entry row_offset = 0;  // s: running sum along this block row
    for (std::size_t col = 0; col < cols; ++col) {
      const std::size_t jp = col / params.o;
      const std::size_t kp = col % params.o;
      const Entry rank = a(row, col);
      for (Entry t = 0; t < rank; ++t) {
        const std::size_t src = params.flat(col_offset[col] + t, jp, kp);
        img[src] = static_cast<std::uint32_t>(params.flat(i, row_offset + t, k));
      }
      row_offset += rank;
      col_offset[col] += rank;
    }
  }
  return TriplePermutation(params, std::move(img));
}

/// nu o sigma^-1 o nu with the flip nu(i,j,k) = (j,i,k); requires m == n.
inline TriplePermutation flip_conjugate(const TriplePermutation& sigma) {
  if (sigma.params().m != sigma.params().n) throw PreconditionError("flip_conjugate: requires m == n");
  const auto nu = TriplePermutation::flip(sigma.params());
  return compose(nu, compose(invert(sigma), nu));
}

/// Left: Sym(m x o) acting on coordinates (1,3) with Sym(n) on each (i,*,k) fibre.
/// Right: Sym(n x o) acting on coordinates (2,3) with Sym(m) on each (*,j,k) fibre.
enum class WreathSide { Left, Right };

/// Generating set of adjacent transpositions for the chosen wreath-product
/// subgroup; O(mno) generators. Returns {identity} when the subgroup is trivial.
inline std::vector<TriplePermutation> wreath_generators(Params p, WreathSide side) {
  std::vector<TriplePermutation> gens;
  auto make = [&](auto&& map) {
    std::vector<std::uint32_t> img(p.points());
    for (std::size_t f = 0; f < img.size(); ++f) {
      const auto t = p.triple(f);
      img[f] = static_cast<std::uint32_t>(map(t.i, t.j, t.k));
    }
    gens.emplace_back(p, std::move(img));
  };

  if (side == WreathSide::Left) {
    // Base: swap blocks (i,k) and the next (i,k) in lexicographic order, all j.
    for (std::size_t b = 0; b + 1 < p.m * p.o; ++b) {
      make([&](std::size_t i, std::size_t j, std::size_t k) {
        std::size_t blk = i * p.o + k;
        if (blk == b) blk = b + 1;
        else if (blk == b + 1) blk = b;
        return p.flat(blk / p.o, j, blk % p.o);
      });
    }
    // Fibres: swap j and j+1 inside the fibre (i, *, k).
    for (std::size_t fi = 0; fi < p.m; ++fi)
      for (std::size_t fk = 0; fk < p.o; ++fk)
        for (std::size_t j0 = 0; j0 + 1 < p.n; ++j0)
          make([&](std::size_t i, std::size_t j, std::size_t k) {
            if (i == fi && k == fk) j = (j == j0) ? j0 + 1 : (j == j0 + 1 ? j0 : j);
            return p.flat(i, j, k);
          });
  } else {
    for (std::size_t b = 0; b + 1 < p.n * p.o; ++b) {
      make([&](std::size_t i, std::size_t j, std::size_t k) {
        std::size_t blk = j * p.o + k;
        if (blk == b) blk = b + 1;
        else if (blk == b + 1) blk = b;
        return p.flat(i, blk / p.o, blk % p.o);
      });
    }
    for (std::size_t fj = 0; fj < p.n; ++fj)
      for (std::size_t fk = 0; fk < p.o; ++fk)
        for (std::size_t i0 = 0; i0 + 1 < p.m; ++i0)
          make([&](std::size_t i, std::size_t j, std::size_t k) {
            if (j == fj && k == fk) i = (i == i0) ? i0 + 1 : (i == i0 + 1 ? i0 : i);
            return p.flat(i, j, k);
          });
  }
  if (gens.empty()) gens.push_back(TriplePermutation::identity(p));
  return gens;
}

namespace detail {

inline std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= k;
  return f;
}

// Lehmer-code rank; rank order coincides with lexicographic order of images.
inline std::uint64_t perm_rank(const std::vector<std::uint32_t>& img, const std::vector<std::uint64_t>& fact) {
  const std::size_t n = img.size();
  std::uint64_t rank = 0;
  std::uint32_t used = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const std::uint32_t smaller = static_cast<std::uint32_t>(std::popcount(used & ((1u << img[p]) - 1u)));
    rank += (img[p] - smaller) * fact[n - 1 - p];
    used |= 1u << img[p];
  }
  return rank;
}

inline void perm_unrank(std::uint64_t rank, std::size_t n, const std::vector<std::uint64_t>& fact,
                        std::vector<std::uint32_t>& img) {
  img.resize(n);
  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0u);
  for (std::size_t p = 0; p < n; ++p) {
    const std::uint64_t q = rank / fact[n - 1 - p];
    rank %= fact[n - 1 - p];
    img[p] = pool[q];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(q));
  }
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::uint32_t{0}); }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // Keeps the smaller index as root so each root is the least element of its class.
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

// Partitions Sym(m x n x o) into classes generated by x ~ g x (left gens),
// x ~ x h (right gens) and optionally x ~ flip_conjugate(x).
inline std::vector<std::pair<std::uint32_t, std::uint64_t>> partition_symmetric_group(
    Params p, const std::vector<TriplePermutation>& left, const std::vector<TriplePermutation>& right, bool flip) {
  const std::size_t n = p.points();
  std::vector<std::uint64_t> fact(n + 1);
  for (std::size_t k = 0; k <= n; ++k) fact[k] = factorial(k);
  const std::uint64_t total = fact[n];
  UnionFind uf(static_cast<std::size_t>(total));

  std::vector<std::uint32_t> nu;
  if (flip) nu = TriplePermutation::flip(p).images();

  std::vector<std::uint32_t> img, tmp(n), inv(n);
  for (std::uint64_t r = 0; r < total; ++r) {
    perm_unrank(r, n, fact, img);
    for (const auto& g : left) {
      for (std::size_t f = 0; f < n; ++f) tmp[f] = g(img[f]);
      uf.unite(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(perm_rank(tmp, fact)));
    }
    for (const auto& h : right) {
      for (std::size_t f = 0; f < n; ++f) tmp[f] = img[h(f)];
      uf.unite(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(perm_rank(tmp, fact)));
    }
    if (flip) {
      for (std::size_t f = 0; f < n; ++f) inv[img[f]] = static_cast<std::uint32_t>(f);
      for (std::size_t f = 0; f < n; ++f) tmp[f] = nu[inv[nu[f]]];
      uf.unite(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(perm_rank(tmp, fact)));
    }
  }

  std::vector<std::uint64_t> size(static_cast<std::size_t>(total), 0);
  std::vector<std::pair<std::uint32_t, std::uint64_t>> classes;
  for (std::uint64_t r = 0; r < total; ++r) ++size[uf.find(static_cast<std::uint32_t>(r))];
  for (std::uint64_t r = 0; r < total; ++r)
    if (size[r] != 0) classes.emplace_back(static_cast<std::uint32_t>(r), size[r]);
  return classes;
}

}  // namespace detail

struct DoubleCosetClass {
  TriplePermutation representative;  // lexicographically least image sequence
  std::uint64_t size;
};

struct DoubleCosetResult {
  Params params;
  bool flip_identified = false;
  std::vector<DoubleCosetClass> classes;  // sorted by representative

  std::size_t count() const noexcept { return classes.size(); }
};

/// Brute-force partition of Sym(m x n x o) into double cosets
/// H_Left . sigma . H_Right by union-find over all (mno)! elements. With
/// `identify_flip` and m == n, sigma is also merged with flip_conjugate(sigma).
inline DoubleCosetResult double_coset_classes(Params p, bool identify_flip, const Limits& limits = {}) {
  limits.check("m*n*o", p.points(), limits.max_oracle_points);
  if (p.points() > 11) throw PreconditionError("double_coset_classes: m*n*o > 11 cannot be indexed");
  const bool flip = identify_flip && p.m == p.n;
  auto parts = detail::partition_symmetric_group(p, wreath_generators(p, WreathSide::Left),
                                                 wreath_generators(p, WreathSide::Right), flip);
  std::vector<std::uint64_t> fact(p.points() + 1);
  for (std::size_t k = 0; k <= p.points(); ++k) fact[k] = detail::factorial(k);

  DoubleCosetResult out{p, flip, {}};
  std::vector<std::uint32_t> img;
  for (auto [rank, size] : parts) {
    detail::perm_unrank(rank, p.points(), fact, img);
    out.classes.push_back({TriplePermutation(p, img), size});
  }
  return out;
}

/// Number of one-sided cosets sigma . H (Right) or H . sigma (Left), i.e.
/// (mno)! / |H|, computed by the same union-find.
inline std::size_t one_sided_coset_count(Params p, WreathSide side, const Limits& limits = {}) {
  limits.check("m*n*o", p.points(), limits.max_oracle_points);
  if (p.points() > 11) throw PreconditionError("one_sided_coset_count: m*n*o > 11 cannot be indexed");
  const auto gens = wreath_generators(p, side);
  const std::vector<TriplePermutation> none;
  return side == WreathSide::Left ? detail::partition_symmetric_group(p, gens, none, false).size()
                                  : detail::partition_symmetric_group(p, none, gens, false).size();
}

/// Permutation text format: "m n o" then the m*n*o 1-based flat images.
inline void write_permutation(std::ostream& os, const TriplePermutation& sigma) {
  const auto& p = sigma.params();
  os << p.m << ' ' << p.n << ' ' << p.o << '\n';
  for (std::size_t f = 0; f < sigma.size(); ++f) os << (f ? " " : "") << sigma(f) + 1;
  os << '\n';
}

inline std::string to_text(const TriplePermutation& sigma) {
  std::ostringstream os;
  write_permutation(os, sigma);
  return os.str();
}

/// Reads the permutation text format. After the header, either the full list of
/// 1-based images or one line of cycle notation such as "(1 2)(3 4)" is accepted.
inline TriplePermutation read_permutation(std::istream& is) {
  long long m = 0, n = 0, o = 0;
  if (!(is >> m >> n >> o) || m <= 0 || n <= 0 || o <= 0)
    throw ParseError("permutation text: expected \"m n o\" header");
  const Params p(static_cast<std::size_t>(m), static_cast<std::size_t>(n), static_cast<std::size_t>(o));
  const std::size_t size = p.points();

  is >> std::ws;
  std::vector<std::uint32_t> img(size);
  if (is.peek() == '(') {
    std::string line;
    std::getline(is, line);
    std::iota(img.begin(), img.end(), 0u);
    std::vector<bool> seen(size, false);
    std::size_t pos = 0;
    while ((pos = line.find('(', pos)) != std::string::npos) {
      const std::size_t close = line.find(')', pos);
      if (close == std::string::npos) throw ParseError("permutation text: unbalanced cycle");
      std::istringstream cyc(line.substr(pos + 1, close - pos - 1));
      std::vector<std::uint32_t> elems;
      long long v = 0;
      while (cyc >> v) {
        if (v < 1 || static_cast<std::size_t>(v) > size) throw ParseError("permutation text: cycle entry out of range");
        if (seen[static_cast<std::size_t>(v - 1)]) throw ParseError("permutation text: cycles must be disjoint");
        seen[static_cast<std::size_t>(v - 1)] = true;
        elems.push_back(static_cast<std::uint32_t>(v - 1));
      }
      if (!cyc.eof()) throw ParseError("permutation text: malformed cycle");
      for (std::size_t t = 0; t < elems.size(); ++t) img[elems[t]] = elems[(t + 1) % elems.size()];
      pos = close + 1;
    }
  } else {
    for (std::size_t f = 0; f < size; ++f) {
      long long v = 0;
      if (!(is >> v) || v < 1 || static_cast<std::size_t>(v) > size)
        throw ParseError("permutation text: expected " + std::to_string(size) + " images in 1.." + std::to_string(size));
      img[f] = static_cast<std::uint32_t>(v - 1);
    }
  }
  try {
    return TriplePermutation(p, std::move(img));
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("permutation text: ") + e.what());
  }
}

inline TriplePermutation parse_permutation(const std::string& text) {
  std::istringstream is(text);
  return read_permutation(is);
}

}  // namespace cartan
