// cumex: leakage tables, noise sweeps, expansion listings and self-validation.
//
// Exit codes: 0 success, 1 mismatch or failed check, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cumex/cumex.hpp"

namespace {

using namespace cumex;

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint32_t parse_poly(const std::string& s) {
  if (s.empty()) return 0;
  try {
    std::size_t pos = 0;
    const unsigned long v = std::stoul(s, &pos, 16);
    if (pos != s.size()) throw std::invalid_argument(s);
    return static_cast<std::uint32_t>(v);
  } catch (const std::exception&) {
    throw UsageError("bad --poly value '" + s + "' (expected hex, e.g. 0x11D)");
  }
}

gf2m::FieldSpec field_from(const std::string& name, const std::string& poly) {
  try {
    return gf2m::FieldSpec::by_name(name, parse_poly(poly));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::vector<std::uint32_t> default_constants(const std::string& field) {
  if (field == "f16") return {1, 4, 8, 3};
  return {1, 128, 143, 45, 29};
}

// ---------------------------------------------------------------- table

struct TableOptions {
  std::vector<std::string> fields{"f16", "f256"};
  std::vector<std::uint32_t> constants;
  std::string poly;
  std::string format = "text";
  std::string golden;
  bool check = false;
  int max_k = 8;
};

int cmd_table(const TableOptions& o) {
  const GoldenSet golden = o.golden.empty() ? embedded_golden() : load_golden(o.golden);
  nlohmann::json js = nlohmann::json::array();
  bool all_match = true;
  if (o.format == "csv") std::cout << "field,C,K,V_K,sigma_Z2,V_1..V_K\n";

  for (const auto& fname : o.fields) {
    const auto field = field_from(fname, o.poly);
    const auto cs = o.constants.empty() ? default_constants(fname) : o.constants;
    for (auto C : cs) {
      std::unique_ptr<MaskingScheme> scheme;
      try {
        scheme = std::make_unique<MaskingScheme>(field, C);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto d = build_distribution(*scheme);
      LeakageProfile p;
      try {
        p = hci_order(d, o.max_k);
      } catch (const BalancedError& e) {
        std::cout << fname << " C=" << C << ": " << e.what() << '\n';
        if (o.check) all_match = false;
        continue;
      }

      std::string status;
      if (o.check) {
        const auto* rec = golden.find_published(fname, C);
        if (!rec) {
          status = "no published value";
          all_match = false;
        } else if (rec->K == p.K && rec->V == p.V.at(p.K)) {
          status = "match";
        } else {
          status = "MISMATCH (published K=" + std::to_string(rec->K) + " V" + std::to_string(rec->K) + "=" +
                   format_g17(to_double(rec->V)) + ")";
          all_match = false;
        }
      }

      if (o.format == "json") {
        nlohmann::json row{{"field", fname}, {"C", C}, {"K", p.K}, {"sigma_Z2", to_string(p.sigma_Z2)}};
        for (const auto& [k, v] : p.V) row["V"][std::to_string(k)] = to_string(v);
        if (o.check) row["check"] = status;
        js.push_back(row);
      } else if (o.format == "csv") {
        std::cout << fname << ',' << C << ',' << p.K << ',' << format_g17(to_double(p.V.at(p.K))) << ','
                  << format_g17(to_double(p.sigma_Z2));
        for (const auto& [k, v] : p.V) std::cout << ',' << format_g17(to_double(v));
        std::cout << '\n';
      } else {
        std::cout << fname << " C=" << C << " K=" << p.K;
        for (const auto& [k, v] : p.V) std::cout << " V" << k << '=' << format_g17(to_double(v));
        std::cout << " sigma_Z2=" << format_g17(to_double(p.sigma_Z2));
        if (o.check) std::cout << "  [" << status << ']';
        std::cout << '\n';
      }
    }
  }
  if (o.format == "json") std::cout << js.dump(2) << '\n';
  return all_match ? kOk : kMismatch;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
  SweepConfig cfg;
  std::string poly;
  std::string grid;
  std::string gnuplot_path;
};

std::vector<double> parse_grid(const std::string& s) {
  // lo:hi:n in log10 units
  double lo, hi;
  int n;
  char c1, c2;
  std::istringstream in(s);
  if (!(in >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || !in.eof())
    throw UsageError("bad --grid '" + s + "' (expected log10lo:log10hi:points)");
  try {
    return log_grid(lo, hi, n);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int cmd_sweep(SweepOptions o) {
  o.cfg.poly = parse_poly(o.poly);
  if (!o.grid.empty()) o.cfg.sigma_N2 = parse_grid(o.grid);
  field_from(o.cfg.field, o.poly);
  try {
    o.cfg.validate();
    for (auto C : o.cfg.constants) MaskingScheme(gf2m::FieldSpec::by_name(o.cfg.field, o.cfg.poly), C);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto rows = run_sweep(o.cfg);

  if (o.cfg.output.empty()) {
    write_sweep_csv(std::cout, rows);
  } else {
    std::ofstream out(o.cfg.output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + o.cfg.output);
    write_sweep_csv(out, rows);
  }
  if (o.cfg.gnuplot) {
    const std::string csv = o.cfg.output.empty() ? "sweep.csv" : o.cfg.output;
    const std::string path = o.gnuplot_path.empty() ? csv + ".gp" : o.gnuplot_path;
    std::ofstream gp(path);
    if (!gp) throw std::runtime_error("cannot write " + path);
    write_gnuplot(gp, csv, rows);
  }

  // slope of log MI against log sigma_N^2 over [10, 100]
  bool flagged = false;
  for (auto C : o.cfg.constants) {
    std::vector<double> x, y;
    int K = 0;
    for (const auto& r : rows) {
      if (r.C != C) continue;
      flagged = flagged || !r.converged;
      K = r.K;
      if (r.sigma_N2 >= 10 * (1 - 1e-12) && r.sigma_N2 <= 100 * (1 + 1e-12) && r.mi_exact > 0) {
        x.push_back(r.sigma_N2);
        y.push_back(r.mi_exact);
      }
    }
    if (x.size() >= 2)
      std::cerr << o.cfg.field << " C=" << C << " K=" << K << " slope[10,100]=" << format_g17(loglog_slope(x, y))
                << " (" << x.size() << " points)\n";
  }
  if (flagged) std::cerr << "warning: some rows did not reach the quadrature tolerance (converged=0)\n";
  return kOk;
}

// ---------------------------------------------------------------- expand

int cmd_expand(int K, const std::string& basis) {
  if (K < 3 || K > 8) throw UsageError("--order must be in 3..8");
  const auto generic = divergence_expansion_generic(K);
  const auto result = basis == "mtilde" ? generic : to_cumulant_basis(generic);
  std::cout << result.to_string();
  return kOk;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::string& filter, const std::string& golden_path) {
  GoldenSet golden;
  try {
    golden = golden_path.empty() ? embedded_golden() : load_golden(golden_path);
  } catch (const std::exception& e) {
    std::cout << "FAIL golden.load: " << e.what() << '\n';
    return kMismatch;
  }
  const auto checks = standard_checks();
  if (!filter.empty() && std::none_of(checks.begin(), checks.end(), [&](const Check& c) { return c.selected(filter); }))
    throw UsageError("filter '" + filter + "' selects no checks");
  return run_validation(golden, filter, std::cout).ok() ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cumulant expansions of information measures for masked leakage"};
  app.set_config("--config", "", "key=value configuration file");
  app.require_subcommand(1);

  TableOptions topt;
  auto* table = app.add_subcommand("table", "HCI order and inter-class variances per masking constant");
  table->add_option("--field", topt.fields, "f16 and/or f256")->check(CLI::IsMember({"f16", "f256"}))->delimiter(',');
  table->add_option("--const", topt.constants, "masking constant(s) C; default: the published columns")->delimiter(',');
  table->add_option("--poly", topt.poly, "reduction polynomial override (hex)");
  table->add_option("--format", topt.format)->check(CLI::IsMember({"text", "csv", "json"}));
  table->add_option("--golden", topt.golden, "golden file with published values");
  table->add_option("--max-k", topt.max_k, "highest moment order searched")->check(CLI::Range(1, 16));
  table->add_flag("--check", topt.check, "compare with published values; exit 1 on mismatch");

  SweepOptions sopt;
  std::vector<std::uint32_t> sweep_consts;
  auto* sweep = app.add_subcommand("sweep", "exact MI vs predictions over a sigma_N^2 grid (CSV)");
  sweep->add_option("--field", sopt.cfg.field)->check(CLI::IsMember({"f16", "f256"}));
  sweep->add_option("--const", sweep_consts, "masking constant(s) C")->delimiter(',');
  sweep->add_option("--poly", sopt.poly, "reduction polynomial override (hex)");
  sweep->add_option("--grid", sopt.grid, "log10lo:log10hi:points (default -1:2.5:30)");
  sweep->add_option("--order", sopt.cfg.expansion_order, "expansion order K for mi_expansion")->check(CLI::Range(3, 6));
  sweep->add_option("--output,-o", sopt.cfg.output, "CSV path (default stdout)");
  sweep->add_flag("--gnuplot", sopt.cfg.gnuplot, "also write a gnuplot script");
  sweep->add_option("--gnuplot-path", sopt.gnuplot_path);
  sweep->add_option("--abs-tol", sopt.cfg.quadrature.abs_tol);
  sweep->add_option("--rel-tol", sopt.cfg.quadrature.rel_tol);
  sweep->add_option("--range-sigmas", sopt.cfg.quadrature.range_sigmas);
  sweep->add_option("--max-subdivisions", sopt.cfg.quadrature.max_subdivisions);

  int order = 6;
  std::string basis = "cumulant";
  auto* expand = app.add_subcommand("expand", "divergence expansion term list");
  expand->add_option("--order", order, "K in 3..8");
  expand->add_option("--basis", basis)->check(CLI::IsMember({"cumulant", "mtilde"}));

  std::string filter, golden_path;
  auto* validate = app.add_subcommand("validate", "run the self-test suite");
  validate->add_option("--filter", filter, "group or group.name");
  validate->add_option("--golden", golden_path, "golden file (default: embedded)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*table) return cmd_table(topt);
    if (*sweep) {
      if (!sweep_consts.empty()) sopt.cfg.constants = sweep_consts;
      return cmd_sweep(sopt);
    }
    if (*expand) return cmd_expand(order, basis);
    if (*validate) return cmd_validate(filter, golden_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMismatch;
  }
  return kUsage;
}
