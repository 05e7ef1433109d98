#ifndef CANON_FORMATS_HPP
#define CANON_FORMATS_HPP

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "canon/ordering.hpp"

namespace canon {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace fmt_detail {

inline std::vector<std::string> split_lines(std::string_view text)
{
  if (text.find('\r') != std::string_view::npos) throw FormatError("CR line endings are not allowed");
  if (text.empty() || text.back() != '\n') throw FormatError("file must end with a newline");
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string line(text.substr(pos, nl - pos));
    if (!line.empty() && (line.back() == ' ' || line.back() == '\t'))
      throw FormatError("trailing whitespace on line " + std::to_string(lines.size() + 1));
    lines.push_back(std::move(line));
    pos = nl + 1;
  }
  return lines;
}

inline std::uint64_t parse_uint(std::string_view s, const char* what)
{
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw FormatError(std::string("bad ") + what + ": '" + std::string(s) + "'");
  return v;
}

inline std::uint64_t expect_field(const std::string& line, std::string_view key)
{
  if (line.size() <= key.size() + 1 || line.compare(0, key.size(), key) != 0 || line[key.size()] != ' ')
    throw FormatError("expected '" + std::string(key) + " <value>', got '" + line + "'");
  return parse_uint(std::string_view(line).substr(key.size() + 1), std::string(key).c_str());
}

inline void expect_line(const std::string& line, std::string_view want)
{
  if (line != want) throw FormatError("expected '" + std::string(want) + "', got '" + line + "'");
}

struct Table {
  int k, n;
  std::vector<std::uint32_t> values;
};

inline Table read_table(std::string_view text, std::string_view magic, std::string_view section)
{
  auto lines = split_lines(text);
  if (lines.size() < 4) throw FormatError("truncated header");
  expect_line(lines[0], magic);
  Table t;
  t.k = static_cast<int>(expect_field(lines[1], "k"));
  t.n = static_cast<int>(expect_field(lines[2], "n"));
  if (t.k > kMaxK + 2 || t.n < t.k) throw FormatError("bad k/n");
  expect_line(lines[3], section);
  std::uint64_t count = binom(t.n, t.k);
  if (lines.size() != 4 + count) throw FormatError("expected " + std::to_string(count) + " entries");
  t.values.reserve(count);
  for (std::size_t i = 4; i < lines.size(); ++i)
    t.values.push_back(static_cast<std::uint32_t>(parse_uint(lines[i], "entry")));
  return t;
}

inline std::string write_table(std::string_view magic, std::string_view section, int k, int n,
                               const std::vector<std::uint32_t>& values)
{
  std::ostringstream os;
  os << magic << "\nk " << k << "\nn " << n << "\n" << section << "\n";
  for (auto v : values) os << v << "\n";
  return os.str();
}

}  // namespace fmt_detail

inline std::string write_kof(const Ordering& o)
{
  Ordering m = materialise(o);
  return fmt_detail::write_table("KOF 1", "ranks", m.k(), m.n(), m.ranks());
}

inline Ordering read_kof(std::string_view text)
{
  auto t = fmt_detail::read_table(text, "KOF 1", "ranks");
  try {
    return Ordering::from_ranks(t.k, t.n, std::move(t.values));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

inline std::string write_kef(const Equivalence& e)
{
  return fmt_detail::write_table("KEF 1", "classes", e.k(), e.n(), e.labels());
}

inline Equivalence read_kef(std::string_view text)
{
  auto t = fmt_detail::read_table(text, "KEF 1", "classes");
  Equivalence e = Equivalence::from_labels(t.k, t.n, t.values);
  if (e.labels() != t.values) throw FormatError("class labels are not normalised");
  return e;
}

/// A 2-colouring of [r]^(2), values +1/-1 in colex order.
struct PairColouring {
  int r = 0;
  std::vector<signed char> values;

  int operator()(int a, int b) const
  {
    if (a > b) std::swap(a, b);
    return values[binom(a - 1, 1) + binom(b - 1, 2)];
  }
  static PairColouring constant(int r, int v)
  {
    return {r, std::vector<signed char>(binom(r, 2), static_cast<signed char>(v))};
  }
  std::string str() const
  {
    std::string s;
    for (auto v : values) s += v > 0 ? '+' : '-';
    return s;
  }
  static PairColouring parse(int r, std::string_view s)
  {
    if (s.size() != binom(r, 2)) throw FormatError("colouring string has wrong length");
    PairColouring g{r, {}};
    for (char c : s) {
      if (c != '+' && c != '-') throw FormatError("colouring must use + and -");
      g.values.push_back(c == '+' ? 1 : -1);
    }
    return g;
  }
};

inline std::string write_pcf(const PairColouring& g)
{
  return "PCF 1\nr " + std::to_string(g.r) + "\n" + g.str() + "\n";
}

inline PairColouring read_pcf(std::string_view text)
{
  auto lines = fmt_detail::split_lines(text);
  if (lines.size() != 3) throw FormatError("PCF 1 has exactly three lines");
  fmt_detail::expect_line(lines[0], "PCF 1");
  int r = static_cast<int>(fmt_detail::expect_field(lines[1], "r"));
  return PairColouring::parse(r, lines[2]);
}

inline std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace canon

#endif  // CANON_FORMATS_HPP
