#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cartan/classify.hpp"
#include "cartan/error.hpp"
#include "cartan/graphs.hpp"
#include "cartan/json_io.hpp"
#include "cartan/matrices.hpp"
#include "cartan/permutations.hpp"

namespace cartan::cli {

enum class Command { Count, Classes, Spectra, Oracle, Verify, Dot };
enum class Output { Text, Json, Csv };

struct CliConfig {
  Command command = Command::Count;
  std::size_t m = 0, n = 0, o = 0;
  Output output = Output::Text;
  bool transpose = true;
  bool force = false;
  std::string out_path;
  std::size_t max_n = 8;
  std::size_t max_o = 3;
  unsigned threads = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitGuard = 1;
inline constexpr int kExitUsage = 2;

/// Worker cap from CARTAN_COUNT_THREADS; 1 when unset or malformed.
inline unsigned threads_from_env() {
  const char* v = std::getenv("CARTAN_COUNT_THREADS");
  if (v == nullptr) return 1;
  char* end = nullptr;
  const long t = std::strtol(v, &end, 10);
  return (end != v && *end == '\0' && t >= 1 && t <= 256) ? static_cast<unsigned>(t) : 1u;
}

namespace detail {

inline Limits limits_for(const CliConfig& cfg) {
  Limits l;
  l.force = cfg.force;
  return l;
}

inline std::string join(std::span<const Entry> xs, char sep) {
  std::string s;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) s += sep;
    s += std::to_string(xs[k]);
  }
  return s;
}

inline void run_count(const CliConfig& cfg, std::ostream& out) {
  const Params p(cfg.m, cfg.n, cfg.o);
  const auto report = count_cartan_classes(p, ClassOptions{cfg.transpose, limits_for(cfg)});
  switch (cfg.output) {
    case Output::Text: out << report.class_count << '\n'; break;
    case Output::Json: out << report_to_json(report).dump(2) << '\n'; break;
    case Output::Csv:
      out << "m,n,o,count,oracle\n"
          << p.m << ',' << p.n << ',' << p.o << ',' << report.class_count << ','
          << (report.oracle_count ? std::to_string(*report.oracle_count) : "") << '\n';
      break;
  }
}

inline void run_classes(const CliConfig& cfg, std::ostream& out) {
  const Params p(cfg.m, cfg.n, cfg.o);
  const auto report = count_cartan_classes(p, ClassOptions{cfg.transpose, limits_for(cfg)});
  switch (cfg.output) {
    case Output::Text:
      for (std::size_t k = 0; k < report.classes.size(); ++k) {
        if (k) out << '\n';
        write_matrix(out, report.classes[k].key.canonical);
      }
      break;
    case Output::Json: out << report_to_json(report).dump(2) << '\n'; break;
    case Output::Csv:
      out << "class,rows,cols,entries\n";
      for (std::size_t k = 0; k < report.classes.size(); ++k) {
        const auto& a = report.classes[k].key.canonical;
        out << k + 1 << ',' << a.rows() << ',' << a.cols() << ',' << join(a.entries(), ' ') << '\n';
      }
      break;
  }
}

inline void run_spectra(const CliConfig& cfg, std::ostream& out) {
  const Params p(cfg.m, cfg.n, cfg.o);
  const auto groups = classify_spectra(p, ClassOptions{cfg.transpose, limits_for(cfg)});
  switch (cfg.output) {
    case Output::Text: {
      std::size_t g = 0;
      for (const auto& [homeo, keys] : groups) {
        if (g) out << '\n';
        out << "# type " << ++g << ": circles=" << homeo.circle_count << " core_vertices=" << homeo.core.vertex_count()
            << " core_edges=" << homeo.core.edge_count() << " classes=" << keys.size() << '\n';
        for (const auto& key : keys) write_matrix(out, key.canonical);
      }
      break;
    }
    case Output::Json: {
      json arr = json::array();
      for (const auto& [homeo, keys] : groups) {
        json cls = json::array();
        for (const auto& key : keys) cls.push_back(matrix_to_json(key.canonical));
        arr.push_back(json{{"homeo", homeo_to_json(homeo)}, {"classes", std::move(cls)}});
      }
      out << json{{"params", params_to_json(p)}, {"types", std::move(arr)}}.dump(2) << '\n';
      break;
    }
    case Output::Csv: {
      out << "type,circles,core_vertices,core_edges,class_count\n";
      std::size_t g = 0;
      for (const auto& [homeo, keys] : groups)
        out << ++g << ',' << homeo.circle_count << ',' << homeo.core.vertex_count() << ',' << homeo.core.edge_count()
            << ',' << keys.size() << '\n';
      break;
    }
  }
}

inline void run_oracle(const CliConfig& cfg, std::ostream& out) {
  const Params p(cfg.m, cfg.n, cfg.o);
  const auto plain = double_coset_classes(p, false, limits_for(cfg));
  const auto flipped = double_coset_classes(p, true, limits_for(cfg));
  switch (cfg.output) {
    case Output::Text:
      out << "double_cosets " << plain.count() << '\n' << "with_flip " << flipped.count() << '\n';
      break;
    case Output::Json:
      out << json{{"params", params_to_json(p)}, {"double_cosets", plain.count()}, {"with_flip", flipped.count()}}.dump(2)
          << '\n';
      break;
    case Output::Csv:
      out << "m,n,o,double_cosets,with_flip\n"
          << p.m << ',' << p.n << ',' << p.o << ',' << plain.count() << ',' << flipped.count() << '\n';
      break;
  }
}

inline std::string opt(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : "-"; }

inline bool run_verify(const CliConfig& cfg, std::ostream& out) {
  const auto report = verify_formulas(cfg.max_n, cfg.max_o, VerifyOptions{limits_for(cfg), cfg.threads});
  switch (cfg.output) {
    case Output::Text:
      out << std::left << std::setw(4) << "m" << std::setw(4) << "n" << std::setw(4) << "o" << std::setw(7) << "count"
          << std::setw(8) << "oracle" << std::setw(14) << "formula" << std::setw(10) << "expected" << "status\n";
      for (const auto& r : report.rows) {
        out << std::setw(4) << r.params.m << std::setw(4) << r.params.n << std::setw(4) << r.params.o << std::setw(7)
            << opt(r.count) << std::setw(8) << opt(r.oracle ? std::optional<std::uint64_t>(*r.oracle) : std::nullopt)
            << std::setw(14) << r.formula_name << std::setw(10) << opt(r.expected) << to_string(r.status) << '\n';
      }
      out << "realized class counts:";
      for (const auto& [t, by] : report.realized) {
        out << ' ' << t << '=';
        if (by) out << '(' << by->m << ',' << by->n << ',' << by->o << ')';
        else out << '-';
      }
      out << '\n';
      break;
    case Output::Csv:
      out << "m,n,o,count,oracle,formula_name,expected,status\n";
      for (const auto& r : report.rows)
        out << r.params.m << ',' << r.params.n << ',' << r.params.o << ',' << (r.count ? std::to_string(*r.count) : "")
            << ',' << (r.oracle ? std::to_string(*r.oracle) : "") << ',' << r.formula_name << ','
            << (r.expected ? std::to_string(*r.expected) : "") << ',' << to_string(r.status) << '\n';
      break;
    case Output::Json: {
      json rows = json::array();
      for (const auto& r : report.rows) {
        rows.push_back(json{{"params", params_to_json(r.params)},
                            {"count", r.count ? json(*r.count) : json(nullptr)},
                            {"oracle", r.oracle ? json(*r.oracle) : json(nullptr)},
                            {"formula_name", r.formula_name},
                            {"expected", r.expected ? json(*r.expected) : json(nullptr)},
                            {"status", to_string(r.status)}});
      }
      json realized = json::array();
      for (const auto& [t, by] : report.realized)
        realized.push_back(json{{"classes", t}, {"params", by ? params_to_json(*by) : json(nullptr)}});
      out << json{{"rows", std::move(rows)}, {"realized", std::move(realized)}}.dump(2) << '\n';
      break;
    }
  }
  return report.all_pass();
}

inline void run_dot(const CliConfig& cfg, std::ostream& out) {
  const Params p(cfg.m, cfg.n, cfg.o);
  const auto keys = enumerate_congruence_classes(p.margin_spec(), cfg.transpose, limits_for(cfg));
  const std::filesystem::path dir = cfg.out_path.empty() ? std::filesystem::path(".") : std::filesystem::path(cfg.out_path);
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < keys.size(); ++k) {
    std::ostringstream name;
    name << "class_" << std::setw(3) << std::setfill('0') << k + 1 << ".dot";
    const auto path = dir / name.str();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << to_dot(graph_from_matrix(keys[k].canonical));
    out << path.string() << '\n';
  }
}

}  // namespace detail

/// Runs one command. `args` excludes the program name. Returns the process
/// exit status: 0 success, 1 guard refusal (or a failed verification row),
/// 2 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  cfg.threads = threads_from_env();
  std::string output = "text";

  CLI::App app{"Counts and classifies congruence classes of margin-constrained matrices (Cartan subalgebras of "
               "stabilised dimension drop algebras)",
               "cartan_count"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool needs_params) {
    if (needs_params) {
      sub->add_option("--m", cfg.m, "parameter m (>= 1)")->required()->check(CLI::PositiveNumber);
      sub->add_option("--n", cfg.n, "parameter n (>= 1)")->required()->check(CLI::PositiveNumber);
      sub->add_option("--o", cfg.o, "parameter o (>= 1)")->required()->check(CLI::PositiveNumber);
    }
    sub->add_option("--output", output, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_flag("--transpose,!--no-transpose", cfg.transpose, "include the transpose move (default on)");
    sub->add_flag("--force", cfg.force, "override size guards");
    sub->add_option("--out", cfg.out_path, "output file (directory for dot)");
  };

  auto* count = app.add_subcommand("count", "print the number of congruence classes");
  auto* classes = app.add_subcommand("classes", "print canonical class representatives");
  auto* spectra = app.add_subcommand("spectra", "group classes by spectrum homeomorphism type");
  auto* oracle = app.add_subcommand("oracle", "count double cosets with and without flip identification");
  auto* verify = app.add_subcommand("verify", "check the closed-form class counts on a grid");
  auto* dot = app.add_subcommand("dot", "write one DOT file per class");
  for (auto* sub : {count, classes, spectra, oracle, dot}) add_common(sub, true);
  add_common(verify, false);
  verify->add_option("--max-n", cfg.max_n, "largest n for (2,n,1)")->check(CLI::PositiveNumber);
  verify->add_option("--max-o", cfg.max_o, "largest o for (2,2,o)")->check(CLI::PositiveNumber);

  std::vector<std::string> argv_store{"cartan_count"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  cfg.output = output == "json" ? Output::Json : output == "csv" ? Output::Csv : Output::Text;
  if (count->parsed()) cfg.command = Command::Count;
  else if (classes->parsed()) cfg.command = Command::Classes;
  else if (spectra->parsed()) cfg.command = Command::Spectra;
  else if (oracle->parsed()) cfg.command = Command::Oracle;
  else if (verify->parsed()) cfg.command = Command::Verify;
  else cfg.command = Command::Dot;

  std::ostringstream buffer;
  bool verified = true;
  try {
    switch (cfg.command) {
      case Command::Count: detail::run_count(cfg, buffer); break;
      case Command::Classes: detail::run_classes(cfg, buffer); break;
      case Command::Spectra: detail::run_spectra(cfg, buffer); break;
      case Command::Oracle: detail::run_oracle(cfg, buffer); break;
      case Command::Verify: verified = detail::run_verify(cfg, buffer); break;
      case Command::Dot: detail::run_dot(cfg, buffer); break;
    }
  } catch (const GuardExceeded& e) {
    err << "refused: " << e.what() << '\n';
    return kExitGuard;
  } catch (const PreconditionError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (!cfg.out_path.empty() && cfg.command != Command::Dot) {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) {
      err << "usage error: cannot write " << cfg.out_path << '\n';
      return kExitUsage;
    }
    f << buffer.str();
  } else {
    out << buffer.str();
  }
  return verified ? kExitOk : kExitGuard;
}

}  // namespace cartan::cli
