#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "germ.hpp"

namespace vey {

class GermParseError : public std::runtime_error {
 public:
  GermParseError(int line, const std::string& msg)
      : std::runtime_error("germ file line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Text format, version 1:
///
///   vey-germ 1
///   J <modes>
///   N <degree>
///   index-set positive
///   records <count>
///   <j> <alpha_1..alpha_J> <beta_1..beta_J> <re> <im>
///
/// Records are sorted by component, then graded lexicographically by monomial.
struct GermFile {
  static constexpr int kVersion = 1;

  static void write(std::ostream& os, const Germ& F) {
    const int J = F.modes();
    std::size_t count = 0;
    for (const auto& p : F.comp) count += p.size();
    os << "vey-germ " << kVersion << "\nJ " << J << "\nN " << F.cap() << "\nindex-set positive\nrecords " << count
       << "\n";
    char buf[64];
    for (int j = 1; j <= J; ++j)
      for (const auto& [m, c] : F(j).terms()) {
        os << j;
        for (int k = 1; k <= J; ++k) os << ' ' << m.alpha(k);
        for (int k = 1; k <= J; ++k) os << ' ' << m.beta(k);
        std::snprintf(buf, sizeof buf, " %.17g %.17g\n", c.real(), c.imag());
        os << buf;
      }
  }

  static Germ read(std::istream& is) {
    int line_no = 0;
    std::string line;
    auto next = [&]() -> std::istringstream {
      if (!std::getline(is, line)) throw GermParseError(line_no + 1, "unexpected end of file");
      ++line_no;
      return std::istringstream(line);
    };
    auto header = [&](const std::string& key) {
      auto ss = next();
      std::string k;
      long long v = 0;
      if (!(ss >> k) || k != key) throw GermParseError(line_no, "expected '" + key + "'");
      if (!(ss >> v)) throw GermParseError(line_no, "missing value for '" + key + "'");
      return v;
    };
    if (header("vey-germ") != kVersion) throw GermParseError(line_no, "unsupported format version");
    const long long J = header("J");
    if (J < 1 || J > kMaxMode) throw GermParseError(line_no, "J out of range");
    const long long N = header("N");
    if (N < 0 || N > kMaxDegree) throw GermParseError(line_no, "N out of range");
    {
      auto ss = next();
      std::string k, v;
      if (!(ss >> k >> v) || k != "index-set") throw GermParseError(line_no, "expected 'index-set'");
      if (v != "positive") throw GermParseError(line_no, "only the positive index set is supported");
    }
    const long long count = header("records");
    if (count < 0) throw GermParseError(line_no, "negative record count");

    Germ F(static_cast<int>(J), static_cast<int>(N));
    int last_j = 0;
    Monomial last_m;
    for (long long r = 0; r < count; ++r) {
      auto ss = next();
      int j = 0;
      if (!(ss >> j) || j < 1 || j > J) throw GermParseError(line_no, "bad component index");
      std::vector<int> alpha(static_cast<std::size_t>(J)), beta(static_cast<std::size_t>(J));
      for (auto& e : alpha)
        if (!(ss >> e) || e < 0) throw GermParseError(line_no, "bad exponent");
      for (auto& e : beta)
        if (!(ss >> e) || e < 0) throw GermParseError(line_no, "bad exponent");
      double re = 0, im = 0;
      if (!(ss >> re >> im)) throw GermParseError(line_no, "bad coefficient");
      std::string rest;
      if (ss >> rest) throw GermParseError(line_no, "trailing fields");
      int deg = 0;
      for (int e : alpha) deg += e;
      for (int e : beta) deg += e;
      if (deg > N) throw GermParseError(line_no, "monomial degree exceeds N");
      const Monomial m = Monomial::from_exponents(alpha, beta);
      if (j < last_j || (j == last_j && !(last_m < m)))
        throw GermParseError(line_no, "records out of canonical order");
      last_j = j;
      last_m = m;
      F(j).add(m, cplx(re, im));
    }
    while (std::getline(is, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) throw GermParseError(line_no, "content after the last record");
    }
    return F;
  }

  static void save(const std::string& path, const Germ& F) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write(os, F);
  }
  static Germ load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read(is);
  }
};

}  // namespace vey
