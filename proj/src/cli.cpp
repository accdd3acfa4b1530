#include "iwasawa/cli.hpp"
#include "iwasawa/error.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace iwasawa {

using nlohmann::ordered_json;

int RunConfig::n_max() const noexcept {
  if (level) return *level;
  return p <= 7 ? 2 : 1;
}

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::symbols: return "symbols";
    case Stage::hecke: return "hecke";
    case Stage::theta: return "theta";
    case Stage::compat: return "compat";
    case Stage::extract: return "extract";
    case Stage::gcd: return "gcd";
    case Stage::compare: return "compare";
  }
  return "?";
}

namespace {

template <class F>
auto in_stage(Stage stage, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(to_string(stage)) + ": " + e.detail());
  }
}

bool is_odd_prime(u32 p) {
  if (p < 3 || p % 2 == 0) return false;
  for (u32 d = 3; d * d <= p; d += 2) {
    if (p % d == 0) return false;
  }
  return true;
}

std::optional<std::filesystem::path> cache_file(const RunConfig& config, const std::string& label, int level) {
  const char* dir = std::getenv("IWASAWA_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir) / (label + "_p" + std::to_string(config.p) + "_L" + std::to_string(level) + "_d" +
                                       std::to_string(config.digits) + ".csv");
}

SymbolTable obtain_table(const RunConfig& config, const CurveData& curve, int level, std::string& source) {
  if (config.import_table) {
    SymbolTable t = import_table(*config.table, curve.label, config.p);
    if (!t.complete_through(level)) {
      throw Error(ErrorKind::IncompleteTable, config.table->string() + " stops before level " + std::to_string(level));
    }
    source = "imported " + config.table->filename().string();
    return t;
  }
  const auto cached = cache_file(config, curve.label, level);
  if (cached && std::filesystem::exists(*cached)) {
    SymbolTable t = import_table(*cached, curve.label, config.p);
    if (t.complete_through(level)) {
      source = "cache " + cached->filename().string();
      return t;
    }
  }
  SymbolOptions options;
  options.digits = config.digits;
  options.precision = config.precision;
  options.denominator_bound = config.denominator_bound;
  SymbolEngine engine(curve, config.p, options);
  // A wrong root number would flip the tail of every period integral.
  check_root_number(curve, engine.supply().at_least(4000), config.digits);
  SymbolTable t = engine.table(level);
  source = "computed, bound " + std::to_string(engine.denominator_bound());
  if (cached) {
    std::filesystem::create_directories(cached->parent_path());
    export_table(t, *cached);
  }
  return t;
}

std::string describe_series(const SignedSeries& s) {
  std::string out = s.label + " from theta_" + std::to_string(s.level) + " mod (p^" +
                    std::to_string(s.series.context().precision()) + ", " + s.series.context().modulus().label + ")";
  if (s.invariants.conclusive()) {
    out += ": mu=" + std::to_string(*s.invariants.mu) + " lambda=" + std::to_string(*s.invariants.lambda);
  } else {
    out += ": vanishes at this precision";
  }
  return out;
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config, Stage last) {
  PipelineResult r{};
  const int n_max = config.n_max();
  auto& cert = r.report.certification;

  in_stage(Stage::ingest, [&] {
    r.curve = ingest_curve(config.curve_file);
    r.reduction = classify_reduction(r.curve, config.p);
    if (r.reduction.kind == ReductionKind::multiplicative || r.reduction.kind == ReductionKind::additive) {
      throw Error(ErrorKind::BadReduction, r.curve.label + " has bad reduction at " + std::to_string(config.p));
    }
    return 0;
  });
  r.report.curve = r.curve.label;
  r.report.p = static_cast<int>(config.p);
  r.report.config = {{"subcommand", config.subcommand},
                     {"curve_file", config.curve_file.filename().string()},
                     {"p", std::to_string(config.p)},
                     {"level", std::to_string(n_max)},
                     {"prec", std::to_string(config.precision)},
                     {"digits", std::to_string(config.digits)},
                     {"denom_bound", config.denominator_bound ? std::to_string(*config.denominator_bound) : "default"},
                     {"fine_char", config.fine_char}};
  cert.emplace_back("ingest", "conductor " + std::to_string(r.curve.conductor) + " confirmed by Tate's algorithm, a_p = " +
                                  std::to_string(r.reduction.a_p) + " (" + std::string(to_string(r.reduction.kind)) + ")");
  if (last == Stage::ingest) return r;

  r.table = in_stage(Stage::symbols, [&] { return obtain_table(config, r.curve, n_max + 1, r.table_source); });
  cert.emplace_back("symbols", "exact rationals through level " + std::to_string(n_max + 1) + ", " + r.table_source);
  if (config.export_table && config.table) {
    in_stage(Stage::symbols, [&] {
      iwasawa::export_table(*r.table, *config.table);
      return 0;
    });
  }
  if (last == Stage::symbols) return r;

  in_stage(Stage::hecke, [&] {
    for (int n = 0; n <= n_max; ++n) {
      const HeckeReport h = validate_hecke(*r.table, r.reduction.a_p, n);
      if (!h.passed) {
        throw Error(ErrorKind::RecognitionFailed,
                    "Hecke relation fails at level " + std::to_string(n) + ": " + h.violations.front());
      }
    }
    return 0;
  });
  cert.emplace_back("hecke", "exact at levels 0.." + std::to_string(n_max));
  if (last == Stage::hecke) return r;

  r.thetas = in_stage(Stage::theta, [&] { return build_thetas(*r.table, n_max, config.precision); });
  cert.emplace_back("theta", "levels 0.." + std::to_string(n_max) + " mod p^" + std::to_string(config.precision));
  if (last == Stage::theta) return r;

  in_stage(Stage::compat, [&] {
    for (int n = 2; n <= n_max; ++n) r.compat.push_back(check_compat(r.thetas, n, r.reduction.a_p));
    return 0;
  });
  cert.emplace_back("compat", n_max >= 2 ? "three-term relation exact at levels 2.." + std::to_string(n_max)
                                         : "no level >= 2 to check");
  if (last == Stage::compat) return r;

  r.pair = in_stage(Stage::extract, [&] { return extract_signed(r.thetas, r.reduction.a_p); });
  cert.emplace_back("extract", std::string(to_string(r.pair->kind)) + " by " + std::string(to_string(r.pair->method)) +
                                   "; " + describe_series(r.pair->series[0]) + "; " + describe_series(r.pair->series[1]));
  if (last == Stage::extract) return r;

  r.gcd = in_stage(Stage::gcd, [&] { return gcd_signed_pair(*r.pair); });
  r.report.gcd = r.gcd;
  cert.emplace_back("gcd", r.gcd->to_string() + (r.gcd->certified ? " certified" : " not certified") + " mod p^" +
                               std::to_string(r.gcd->certified_digits) + " by " + r.gcd->method);
  if (last == Stage::gcd) return r;

  in_stage(Stage::compare, [&] {
    const FactoredIdeal fine = FactoredIdeal::parse(config.fine_char);
    r.report.verdicts.push_back(compare_predictions(*r.gcd, r.curve.e_sequence, fine));
    r.report.verdicts.push_back(theorem_consistency(*r.gcd, fine));
    return 0;
  });
  cert.emplace_back("compare", "fine_char " + config.fine_char + " taken as a hypothesis");
  return r;
}

namespace {

ordered_json optional_int(const std::optional<int>& x) { return x ? ordered_json(*x) : ordered_json(nullptr); }

ordered_json element_json(const LambdaElement& f) {
  const InvariantReport inv = weierstrass(f);
  return {{"modulus", f.context().modulus().label},
          {"precision", f.context().precision()},
          {"mu", optional_int(inv.mu)},
          {"lambda", optional_int(inv.lambda)},
          {"exact_zero_constant", f.exact_zero_constant()},
          {"value", f.to_string()}};
}

std::string curve_info(const RunConfig& config) {
  const CurveData e = in_stage(Stage::ingest, [&] { return ingest_curve(config.curve_file); });
  const CurveInvariants inv = invariants(e);
  ordered_json j;
  j["label"] = e.label;
  j["a_invariants"] = e.a;
  j["conductor"] = e.conductor;
  j["discriminant"] = static_cast<i64>(inv.discriminant);
  j["rank"] = e.rank;
  j["e_sequence"] = e.e_sequence.e;
  j["root_number"] = e.fricke_sign;
  j["torsion_bound"] = e.torsion_bound;
  const Periods per = periods(e, 20);
  j["omega_plus"] = per.omega_plus.str(15);
  j["omega_minus"] = per.omega_minus.str(15);
  if (config.p != 0) {
    const ReductionInfo red = classify_reduction(e, config.p);
    j["reduction"] = {{"p", config.p},
                      {"kind", to_string(red.kind)},
                      {"a_p", red.a_p},
                      {"split", red.split}};
  }
  return j.dump(2) + "\n";
}

std::string render(const RunConfig& config, const PipelineResult& r) {
  const std::string& cmd = config.subcommand;
  if (cmd == "symbols") {
    std::ostringstream out;
    write_table(*r.table, out);
    return out.str();
  }
  ordered_json j;
  j["curve"] = r.curve.label;
  j["p"] = config.p;
  j["a_p"] = r.reduction.a_p;
  if (cmd == "theta") {
    j["precision"] = config.precision;
    ordered_json thetas = ordered_json::array();
    for (const auto& [n, t] : r.thetas) {
      ordered_json tj = element_json(t.body);
      tj["n"] = n;
      thetas.push_back(tj);
    }
    j["thetas"] = thetas;
    ordered_json compat = ordered_json::array();
    for (const auto& c : r.compat) compat.push_back({{"level", c.level}, {"precision", c.precision}});
    j["compat"] = compat;
    return j.dump(2) + "\n";
  }
  j["kind"] = to_string(r.pair->kind);
  if (cmd == "signed") {
    j["method"] = to_string(r.pair->method);
    j["stabilized"] = r.pair->stabilized;
    j["fit_agrees"] = r.pair->fit_agrees ? ordered_json(*r.pair->fit_agrees) : ordered_json(nullptr);
    ordered_json series = ordered_json::array();
    for (const auto& s : r.pair->series) {
      ordered_json sj;
      sj["label"] = s.label;
      sj["level"] = s.level;
      sj.update(element_json(s.series));
      series.push_back(sj);
    }
    j["series"] = series;
  }
  j["gcd"] = r.gcd->to_string();
  j["gcd_certified"] = r.gcd->certified;
  j["gcd_digits"] = r.gcd->certified_digits;
  j["gcd_method"] = r.gcd->method;
  return j.dump(2) + "\n";
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (!config.out) {
    out << text;
    return;
  }
  std::ofstream file(*config.out, std::ios::binary);
  if (!file) throw Error(ErrorKind::IoError, "cannot open " + config.out->string() + " for writing");
  file << text;
  if (!file) throw Error(ErrorKind::IoError, "failed writing " + config.out->string());
}

void add_common(CLI::App* cmd, RunConfig& c, int& level, i64& bound, std::string& format, bool need_p) {
  cmd->add_option("--curve", c.curve_file, "curve JSON file")->required()->check(CLI::ExistingFile);
  auto* p = cmd->add_option("--p", c.p, "odd prime of good reduction");
  if (need_p) p->required();
  cmd->add_option("--level", level, "highest theta level n_max (default 2 for p <= 7, else 1)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--prec", c.precision, "p-adic precision M (>= 2)")->check(CLI::Range(2, 40));
  cmd->add_option("--digits", c.digits, "decimal digits for period integrals")->check(CLI::Range(10u, 400u));
  cmd->add_option("--denom-bound", bound, "denominator bound for symbol recognition")->check(CLI::PositiveNumber);
  cmd->add_option("--table", c.table, "symbol table CSV for --import or --export");
  cmd->add_flag("--import", c.import_table, "read symbols from --table instead of computing them");
  cmd->add_flag("--export", c.export_table, "write computed symbols to --table");
  cmd->add_option("--fine-char", c.fine_char, "fine Selmer characteristic ideal, e.g. 1, X, Phi_1");
  cmd->add_option("--out", c.out, "output file (default standard output)");
  cmd->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Signed p-adic L-functions of elliptic curves at supersingular primes", "iwasawa"};
  app.require_subcommand(1, 1);
  RunConfig config;
  int level = -1;
  i64 bound = 0;
  std::string format = "json";
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"curve-info", "curve data, periods and reduction type at --p"},
      {"symbols", "modular symbol table through level n_max + 1 (CSV)"},
      {"theta", "Mazur-Tate elements and their three-term relation"},
      {"signed", "signed series, their invariants and gcd"},
      {"gcd", "gcd of the signed pair"},
      {"verify", "compare the gcd with the predicted ideals; exit 1 unless PASS"},
      {"report", "full report as JSON or CSV"}};
  for (const auto& [name, help] : commands) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd, config, level, bound, format, std::string_view(name) != "curve-info");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "iwasawa: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  config.subcommand = app.get_subcommands().front()->get_name();
  if (level >= 0) config.level = level;
  if (bound > 0) config.denominator_bound = bound;
  config.format = format == "csv" ? ReportFormat::csv : ReportFormat::json;

  const auto usage = [&](const std::string& message) {
    err << "iwasawa: " << message << "\n\n" << app.help();
    return 2;
  };
  if (config.subcommand != "curve-info" && !is_odd_prime(config.p)) return usage("--p must be an odd prime");
  if (config.subcommand == "curve-info" && config.p != 0 && !is_odd_prime(config.p)) {
    return usage("--p must be an odd prime");
  }
  if ((config.import_table || config.export_table) && !config.table) return usage("--import/--export need --table");
  if (config.import_table && config.export_table) return usage("--import and --export exclude each other");

  try {
    FactoredIdeal::parse(config.fine_char);
  } catch (const Error& e) {
    return usage("--fine-char: " + e.detail());
  }

  try {
    const std::string& cmd = config.subcommand;
    if (cmd == "curve-info") {
      emit(config, curve_info(config), out);
      return 0;
    }
    const Stage last = cmd == "symbols" ? Stage::hecke
                       : cmd == "theta" ? Stage::compat
                       : (cmd == "signed" || cmd == "gcd") ? Stage::gcd
                                                           : Stage::compare;
    const PipelineResult r = run_pipeline(config, last);
    if (cmd == "verify" || cmd == "report") {
      emit(config, render_report(r.report, config.format), out);
      if (cmd == "verify") return r.report.overall() == CheckStatus::pass ? 0 : 1;
      return 0;
    }
    emit(config, render(config, r), out);
    return 0;
  } catch (const Error& e) {
    err << "iwasawa: " << e.what() << "\n";
    return e.kind() == ErrorKind::Usage ? 2 : 1;
  }
}

}  // namespace iwasawa
