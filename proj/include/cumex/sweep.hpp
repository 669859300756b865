#pragma once

// Noise sweeps: exact MI against the asymptotic and expanded predictions
// over a log-spaced sigma_N^2 grid, with CSV and gnuplot output.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cumex/comparison.hpp"
#include "cumex/expansion.hpp"
#include "cumex/gf2m.hpp"
#include "cumex/leakage_model.hpp"
#include "cumex/numeric_info.hpp"

namespace cumex {

inline constexpr const char* kSweepCsvVersion = "cumex-sweep/1";

/// n log-spaced points 10^lo .. 10^hi inclusive.
inline std::vector<double> log_grid(double log10_lo, double log10_hi, int n) {
  if (n < 2 || !(log10_hi > log10_lo)) throw std::invalid_argument("log grid needs n >= 2 and hi > lo");
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(std::pow(10.0, log10_lo + (log10_hi - log10_lo) * i / (n - 1)));
  return g;
}

struct SweepConfig {
  std::string field = "f16";
  std::uint32_t poly = 0;  // 0: field default
  std::vector<std::uint32_t> constants{3};
  std::vector<double> sigma_N2 = log_grid(-1.0, 2.5, 30);
  int expansion_order = 6;
  std::string output;  // empty: stdout
  bool gnuplot = false;
  QuadratureConfig quadrature;

  void validate() const {
    if (constants.empty()) throw std::invalid_argument("no masking constants given");
    if (sigma_N2.empty()) throw std::invalid_argument("empty noise grid");
    for (std::size_t i = 0; i < sigma_N2.size(); ++i) {
      if (!(sigma_N2[i] > 0)) throw std::invalid_argument("noise grid must be positive");
      if (i && !(sigma_N2[i] > sigma_N2[i - 1])) throw std::invalid_argument("noise grid must be strictly increasing");
    }
    if (expansion_order < 3 || expansion_order > 6) throw std::invalid_argument("expansion order must be in 3..6");
    quadrature.validate();
  }
};

/// Everything about one (field, C) pair that does not depend on the noise.
struct SchemeData {
  gf2m::FieldSpec field;
  std::uint32_t C;
  SensitiveDistribution<Rational> dist;
  LeakageProfile profile;
  ConditionalCumulantTable<double> cumulants;  // through order 6
  bool balanced = false;                       // no leakage through order 8

  double sigma_Z2() const { return to_double(profile.sigma_Z2); }
  double V_K() const { return balanced ? 0.0 : to_double(profile.V.at(profile.K)); }
};

inline SchemeData analyze_scheme(const gf2m::FieldSpec& f, std::uint32_t C, int max_k = 8) {
  auto dist = build_distribution(MaskingScheme(f, C));
  LeakageProfile prof;
  bool balanced = false;
  try {
    prof = hci_order(dist, max_k);
  } catch (const BalancedError&) {
    balanced = true;
    prof.sigma_Z2 = leakage_variance(dist);
  }
  auto table = to_double(conditional_cumulant_table(dist, 6));
  return {f, C, std::move(dist), std::move(prof), std::move(table), balanced};
}

struct SweepRow {
  std::string field;
  std::uint32_t C = 0;
  int K = 0;
  double sigma_N2 = 0;
  double mi_exact = 0;
  double mi_error = 0;
  bool converged = true;
  double theorem1 = std::numeric_limits<double>::quiet_NaN();
  double mi_expansion = 0;
  double carlet = 0;
  double cardoso = 0;

  double ratio_theorem1() const { return mi_exact / theorem1; }
  double ratio_expansion() const { return mi_exact / mi_expansion; }
};

inline SweepRow sweep_point(const SchemeData& s, double sigma_N2, int expansion_order, const QuadratureConfig& q) {
  SweepRow r;
  r.field = s.field.name();
  r.C = s.C;
  r.K = s.balanced ? 0 : s.profile.K;
  r.sigma_N2 = sigma_N2;
  const auto mi = mutual_information_detailed(s.dist, std::sqrt(sigma_N2), q);
  r.mi_exact = mi.value;
  r.mi_error = mi.error;
  r.converged = mi.converged;
  if (r.K >= 3 && r.K <= 6) r.theorem1 = theorem1_asymptote(r.K, s.V_K(), sigma_N2, s.sigma_Z2());
  const double sigma = std::sqrt(sigma_N2 + s.sigma_Z2());
  r.mi_expansion = mi_expansion(s.cumulants, sigma, expansion_order);
  r.carlet = comparison::carlet_expansion(s.cumulants, sigma, expansion_order);
  r.cardoso = comparison::cardoso_mi_series(s.cumulants, expansion_order)(sigma);
  return r;
}

/// Worker count from CUMEX_THREADS, else the hardware concurrency.
inline unsigned sweep_threads() {
  if (const char* env = std::getenv("CUMEX_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Rows ordered by (C as configured, grid point), whatever order workers finish in.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const auto field = gf2m::FieldSpec::by_name(cfg.field, cfg.poly);
  std::vector<SchemeData> schemes;
  for (auto C : cfg.constants) schemes.push_back(analyze_scheme(field, C));

  const std::size_t n = cfg.sigma_N2.size();
  std::vector<SweepRow> rows(schemes.size() * n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < rows.size();)
      rows[i] = sweep_point(schemes[i / n], cfg.sigma_N2[i % n], cfg.expansion_order, cfg.quadrature);
  };
  const unsigned t = std::min<std::size_t>(sweep_threads(), rows.size());
  std::vector<std::jthread> pool;
  for (unsigned i = 1; i < t; ++i) pool.emplace_back(work);
  work();
  return rows;
}

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "# " << kSweepCsvVersion << '\n';
  os << "field,C,K,sigma_N2,mi_exact,mi_error,converged,theorem1,mi_expansion,carlet,cardoso,"
        "ratio_theorem1,ratio_expansion\n";
  for (const auto& r : rows) {
    os << r.field << ',' << r.C << ',' << r.K << ',' << format_g17(r.sigma_N2) << ',' << format_g17(r.mi_exact)
       << ',' << format_g17(r.mi_error) << ',' << (r.converged ? 1 : 0) << ',' << format_g17(r.theorem1) << ','
       << format_g17(r.mi_expansion) << ',' << format_g17(r.carlet) << ',' << format_g17(r.cardoso) << ','
       << format_g17(r.ratio_theorem1()) << ',' << format_g17(r.ratio_expansion()) << '\n';
  }
}

/// Log-log plot of exact MI and the leading-order prediction, one curve pair per C.
inline void write_gnuplot(std::ostream& os, const std::string& csv_path, const std::vector<SweepRow>& rows) {
  std::vector<std::uint32_t> cs;
  for (const auto& r : rows)
    if (cs.empty() || cs.back() != r.C) cs.push_back(r.C);
  os << "set datafile separator ','\n"
     << "set logscale xy\n"
     << "set format y '10^{%L}'\n"
     << "set xlabel 'sigma_N^2'\n"
     << "set ylabel 'I(X;Y) [nats]'\n"
     << "set key bottom left\n"
     << "set terminal pngcairo size 900,650\n"
     << "set output '" << csv_path << ".png'\n"
     << "plot ";
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i) os << ", \\\n     ";
    os << "'" << csv_path << "' using ($2==" << cs[i] << "?$4:1/0):5 with linespoints title 'C=" << cs[i]
       << " exact', '" << csv_path << "' using ($2==" << cs[i] << "?$4:1/0):8 with lines dt 2 title 'C=" << cs[i]
       << " asymptote'";
  }
  os << '\n';
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs >= 2 paired points");
  double mx = 0, my = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace cumex
