#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cartan/error.hpp"
#include "cartan/graphs.hpp"
#include "cartan/matrices.hpp"
#include "cartan/partitions.hpp"
#include "cartan/permutations.hpp"

namespace cartan {

struct ClassOptions {
  bool allow_transpose = true;
  Limits limits;
};

/// A closed-form class count known for this parameter shape.
struct FormulaExpectation {
  std::string name;
  std::uint64_t expected = 0;

  friend bool operator==(const FormulaExpectation&, const FormulaExpectation&) = default;
};

struct ClassEntry {
  CongruenceKey key;
  std::optional<BlockProfile> blocks;  // present for (m, n) = (2, 2)
  HomeoType homeo;
};

struct ClassificationReport {
  Params params;
  std::size_t class_count = 0;
  std::vector<ClassEntry> classes;
  std::optional<std::size_t> oracle_count;
  std::optional<std::string> oracle_skipped;  // the guard message when the oracle did not run
  std::optional<FormulaExpectation> formula;

  bool consistent() const {
    if (class_count != classes.size()) return false;
    if (oracle_count && *oracle_count != class_count) return false;
    if (formula && formula->expected != class_count) return false;
    return true;
  }
};

/// Closed forms exist only for (2, n, 1) and (2, 2, o).
inline std::optional<FormulaExpectation> formula_for(const Params& p) {
  if (p.m == 2 && p.o == 1) return FormulaExpectation{"floor(n/2)+1", p.n / 2 + 1};
  if (p.m == 2 && p.n == 2) return FormulaExpectation{"p(2o)", partition_count(2 * p.o)};
  return std::nullopt;
}

/// Congruence classes of M(mo, n, no, m) with their spectrum fingerprints,
/// block profiles for (2, 2, o), the closed-form expectation where one is
/// known, and the double-coset oracle count when m*n*o is within its guard.
inline ClassificationReport count_cartan_classes(const Params& params, const ClassOptions& options = {}) {
  ClassificationReport report;
  report.params = params;
  const auto keys = enumerate_congruence_classes(params.margin_spec(), options.allow_transpose, options.limits);
  report.class_count = keys.size();
  for (const auto& key : keys) {
    ClassEntry entry{key, std::nullopt, homeo_type(key.canonical)};
    if (params.m == 2 && params.n == 2) entry.blocks = block_normal_form(key.canonical);
    report.classes.push_back(std::move(entry));
  }
  report.formula = formula_for(params);
  try {
    report.oracle_count = double_coset_classes(params, options.allow_transpose, options.limits).count();
  } catch (const GuardExceeded& e) {
    report.oracle_skipped = e.what();
  } catch (const PreconditionError& e) {
    report.oracle_skipped = e.what();
  }
  return report;
}

using SpectrumGroups = std::map<HomeoType, std::vector<CongruenceKey>>;

/// Groups congruence classes by the homeomorphism type of their spectra.
inline SpectrumGroups classify_spectra(const Params& params, const ClassOptions& options = {}) {
  SpectrumGroups groups;
  const auto keys = enumerate_congruence_classes(params.margin_spec(), options.allow_transpose, options.limits);
  for (const auto& key : keys) groups[homeo_type(key.canonical)].push_back(key);
  return groups;
}

enum class CellStatus { Pass, Fail, Skipped };

inline const char* to_string(CellStatus s) {
  switch (s) {
    case CellStatus::Pass: return "PASS";
    case CellStatus::Fail: return "FAIL";
    case CellStatus::Skipped: return "SKIPPED";
  }
  return "?";
}

struct VerificationRow {
  Params params;
  std::string formula_name;
  std::optional<std::uint64_t> count;
  std::optional<std::size_t> oracle;
  std::optional<std::uint64_t> expected;
  CellStatus status = CellStatus::Skipped;
  std::string note;
};

struct VerificationReport {
  std::vector<VerificationRow> rows;
  // Target class count t -> smallest (2, n, 1) in the grid with exactly t classes.
  std::vector<std::pair<std::uint64_t, std::optional<Params>>> realized;

  bool all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.status == CellStatus::Pass; });
  }
};

struct VerifyOptions {
  Limits limits;
  unsigned threads = 1;
};

/// Checks count(2,n,1) = floor(n/2)+1 for n <= max_n, count(2,2,o) = p(2o) for
/// o <= max_o, and count(n,2,1) = count(2,n,1) on the same grid. Guard refusals
/// mark a row SKIPPED and never abort the run.
inline VerificationReport verify_formulas(std::size_t max_n, std::size_t max_o, const VerifyOptions& options = {}) {
  struct Cell {
    Params params;
    std::string formula;
  };
  std::vector<Cell> cells;
  for (std::size_t n = 1; n <= max_n; ++n) cells.push_back({Params(2, n, 1), "floor(n/2)+1"});
  for (std::size_t o = 1; o <= max_o; ++o) cells.push_back({Params(2, 2, o), "p(2o)"});
  for (std::size_t n = 1; n <= max_n; ++n)
    if (n != 2) cells.push_back({Params(n, 2, 1), "symmetry"});

  std::vector<VerificationRow> rows(cells.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (std::size_t idx = cursor++; idx < cells.size(); idx = cursor++) {
      const auto& cell = cells[idx];
      VerificationRow row{cell.params, cell.formula, {}, {}, {}, CellStatus::Skipped, {}};
      try {
        const auto report = count_cartan_classes(cell.params, ClassOptions{true, options.limits});
        row.count = report.class_count;
        row.oracle = report.oracle_count;
        if (report.oracle_skipped) row.note = "oracle skipped";
        if (cell.formula != "symmetry") row.expected = formula_for(cell.params)->expected;
      } catch (const GuardExceeded& e) {
        row.note = e.what();
      }
      rows[idx] = std::move(row);
    }
  };
  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  // Symmetry rows compare against the (2, n, 1) row computed above.
  for (auto& row : rows) {
    if (row.formula_name != "symmetry") continue;
    for (const auto& other : rows)
      if (other.formula_name == "floor(n/2)+1" && other.params.n == row.params.m) row.expected = other.count;
  }
  for (auto& row : rows) {
    if (!row.count || !row.expected) {
      row.status = CellStatus::Skipped;
      continue;
    }
    const bool ok = *row.count == *row.expected && (!row.oracle || *row.oracle == *row.count);
    row.status = ok ? CellStatus::Pass : CellStatus::Fail;
  }

  VerificationReport out;
  out.rows = std::move(rows);
  std::uint64_t top = 0;
  for (const auto& r : out.rows)
    if (r.formula_name == "floor(n/2)+1" && r.count) top = std::max(top, *r.count);
  for (std::uint64_t t = 1; t <= top; ++t) {
    std::optional<Params> by;
    for (const auto& r : out.rows)
      if (r.formula_name == "floor(n/2)+1" && r.count == t && (!by || r.params.n < by->n)) by = r.params;
    out.realized.emplace_back(t, by);
  }
  return out;
}

}  // namespace cartan
