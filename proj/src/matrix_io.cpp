#include "takagi/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

namespace takagi {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_double(std::string_view tok, int line) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw ParseError(line, "invalid number '" + std::string(tok) + "'");
  return v;
}

}  // namespace

CMatrix read_matrix(std::istream& in) {
  std::string raw;
  int line = 0;
  long n = -1;
  CMatrix a;
  long filled = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    const auto toks = split_ws(s);
    if (n < 0) {
      if (toks.size() != 1) throw ParseError(line, "expected header with dimension n");
      long v = 0;
      auto [ptr, ec] = std::from_chars(toks[0].data(), toks[0].data() + toks[0].size(), v);
      if (ec != std::errc{} || ptr != toks[0].data() + toks[0].size() || v <= 0)
        throw ParseError(line, "dimension must be a positive integer");
      n = v;
      a.resize(n, n);
      continue;
    }
    if (filled >= n * n) throw ParseError(line, "more than n*n entries");
    if (toks.size() != 2) throw ParseError(line, "expected 're im'");
    a(filled / n, filled % n) = Complex(parse_double(toks[0], line), parse_double(toks[1], line));
    ++filled;
  }
  if (n < 0) throw ParseError(line, "missing dimension header");
  if (filled != n * n)
    throw ParseError(line, "expected " + std::to_string(n * n) + " entries, found " +
                               std::to_string(filled));
  return a;
}

CMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const CMatrix& a) {
  std::ostringstream os;
  os.precision(17);
  os << a.rows() << '\n';
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) os << a(i, j).real() << ' ' << a(i, j).imag() << '\n';
  out << os.str();
}

void write_matrix_file(const std::string& path, const CMatrix& a) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_matrix(out, a);
}

}  // namespace takagi
