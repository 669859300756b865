#pragma once

// Golden records: one record per line, '#' starts a comment.
//
//   published <field> <C> <K> <V_K>        published reference column
//   model <field> <C> <K> <V_K>            exact enumeration of the masking model
//   hermite <value> <k1> <k2> ...          integral g He_k1 He_k2 ...
//   term <cumulant|mtilde> <K> <text>      one canonical expansion line
//   ratio <field> <C> <sigma_N2> <value>   MI_exact / asymptote, frozen from the high-precision oracle
//   divergence <field> <C> <sigma_N> <D>   D(Y||Y*) of the marginal, same oracle

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cumex/rational.hpp"

namespace cumex {

struct TableRecord {
  std::string field;
  std::uint32_t C;
  int K;
  Rational V;
};

struct HermiteRecord {
  std::vector<int> indices;
  Rational value;
};

struct TermRecord {
  std::string basis;
  int K;
  std::string text;
};

struct NumericRecord {
  std::string field;
  std::uint32_t C;
  double at;
  double value;
};

struct GoldenSet {
  std::vector<TableRecord> published;
  std::vector<TableRecord> model;
  std::vector<HermiteRecord> hermite;
  std::vector<TermRecord> terms;
  std::vector<NumericRecord> ratios;
  std::vector<NumericRecord> divergences;

  std::vector<std::string> term_lines(const std::string& basis, int K) const {
    std::vector<std::string> out;
    for (const auto& t : terms)
      if (t.basis == basis && t.K == K) out.push_back(t.text);
    return out;
  }

  const TableRecord* find_published(const std::string& field, std::uint32_t C) const {
    for (const auto& r : published)
      if (r.field == field && r.C == C) return &r;
    return nullptr;
  }
};

inline constexpr const char* kEmbeddedGolden = R"(# cumex golden values
published f16 1 2 1
published f16 4 2 1/2
published f16 8 2 1/4
published f16 3 3 1/4
published f256 1 2 2
published f256 128 2 1/2
published f256 143 3 63/16
published f256 45 3 9/16
published f256 29 4 27/4

model f16 1 2 1
model f16 4 2 1/2
model f16 8 2 1/4
model f16 3 3 9/4
model f256 1 2 2
model f256 128 4 81/4
model f256 143 3 27/8
model f256 45 4 27/2
model f256 29 4 27/2

hermite 216 3 3 4
hermite 1728 4 4 4
hermite 1440 3 4 5
hermite 720 3 3 6
hermite 3348 3 3 3 3

term cumulant 6 (1/12) * k3^2 / s^6
term cumulant 6 (1/48) * k4^2 / s^8
term cumulant 6 (-1/8) * k3^2 * k4 / s^10
term cumulant 6 (1/240) * k5^2 / s^10
term cumulant 6 (7/48) * k3^4 / s^12
term cumulant 6 (-1/12) * k3 * k4 * k5 / s^12
term cumulant 6 (-1/48) * k4^3 / s^12
term cumulant 6 (1/1440) * k6^2 / s^12
term mtilde 6 (1/12) * m3^2 / s^6
term mtilde 6 (1/48) * m4^2 / s^8
term mtilde 6 (-1/8) * m3^2 * m4 / s^10
term mtilde 6 (1/240) * m5^2 / s^10
term mtilde 6 (31/144) * m3^4 / s^12
term mtilde 6 (-1/72) * m3^2 * m6 / s^12
term mtilde 6 (-1/12) * m3 * m4 * m5 / s^12
term mtilde 6 (-1/48) * m4^3 / s^12
term mtilde 6 (1/1440) * m6^2 / s^12
term cumulant 3 (1/12) * k3^2 / s^6

# high-precision oracle (tests/oracles/mi_oracle.py)
ratio f16 3 10 1.1109473988105058
ratio f16 3 100 1.0122176707388967
ratio f256 128 10 1.2379232955527887
ratio f256 128 100 1.0228240884171941
divergence f16 3 5 3.9260208810294556e-8
divergence f16 3 10 1.9248852954713508e-10
)";

class GoldenParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline GoldenSet parse_golden(std::istream& in) {
  GoldenSet g;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw GoldenParseError("golden line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    try {
      if (kind == "published" || kind == "model") {
        TableRecord r;
        std::string v;
        if (!(ls >> r.field >> r.C >> r.K >> v)) fail("expected <field> <C> <K> <V>");
        r.V = Rational(v);
        (kind == "model" ? g.model : g.published).push_back(r);
      } else if (kind == "hermite") {
        HermiteRecord r;
        std::string v;
        if (!(ls >> v)) fail("expected <value> <indices>");
        r.value = Rational(v);
        for (int k; ls >> k;) r.indices.push_back(k);
        if (r.indices.empty()) fail("no indices");
        g.hermite.push_back(r);
      } else if (kind == "term") {
        TermRecord r;
        if (!(ls >> r.basis >> r.K)) fail("expected <basis> <K> <text>");
        std::getline(ls >> std::ws, r.text);
        while (!r.text.empty() && std::isspace(static_cast<unsigned char>(r.text.back()))) r.text.pop_back();
        if (r.text.empty()) fail("empty term text");
        g.terms.push_back(r);
      } else if (kind == "ratio" || kind == "divergence") {
        NumericRecord r;
        if (!(ls >> r.field >> r.C >> r.at >> r.value)) fail("expected <field> <C> <at> <value>");
        (kind == "ratio" ? g.ratios : g.divergences).push_back(r);
      } else {
        fail("unknown record kind '" + kind + "'");
      }
    } catch (const GoldenParseError&) {
      throw;
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  return g;
}

inline GoldenSet embedded_golden() {
  std::istringstream in(kEmbeddedGolden);
  return parse_golden(in);
}

inline GoldenSet load_golden(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open golden file " + path);
  return parse_golden(in);
}

}  // namespace cumex
