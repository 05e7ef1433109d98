#ifndef CANON_KOS_HPP
#define CANON_KOS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "canon/canonical.hpp"
#include "canon/formats.hpp"
#include "canon/steppingup.hpp"

namespace canon {

namespace kos_detail {

inline void write_block(const Ordering& o, std::string& out)
{
  auto cmp = o.comparator();
  if (!cmp) {
    out += write_kof(o);
    return;
  }
  out += "KOS 1\n";
  if (auto c = std::dynamic_pointer_cast<const CanonicalComparator>(cmp)) {
    out += "tag canonical\nk " + std::to_string(o.k()) + "\nn " + std::to_string(o.n()) + "\n";
    out += "spec " + c->spec().str() + "\n";
  } else if (auto p = std::dynamic_pointer_cast<const PairStepComparator>(cmp)) {
    out += "tag stepup2\nk 2\nn " + std::to_string(o.n()) + "\nm " + std::to_string(p->cube().m()) + "\n";
    std::string g = p->colouring().str();
    out += g.empty() ? "colouring\n" : "colouring " + g + "\n";
  } else if (auto q = std::dynamic_pointer_cast<const KStepComparator>(cmp)) {
    out += "tag stepupk\nk " + std::to_string(o.k()) + "\nn " + std::to_string(o.n()) + "\nm " +
           std::to_string(q->cube().m()) + "\ninner\n";
    write_block(q->inner(), out);
  } else {
    throw FormatError("ordering with tag '" + cmp->tag() + "' has no KOS form; materialise it as KOF");
  }
  out += "end\n";
}

inline Ordering read_block(const std::vector<std::string>& lines, std::size_t& pos)
{
  using fmt_detail::expect_field;
  using fmt_detail::expect_line;
  auto need = [&](std::size_t count) {
    if (pos + count > lines.size()) throw FormatError("truncated KOS block");
  };
  need(1);
  if (lines[pos] == "KOF 1") {
    need(4);
    int k = static_cast<int>(expect_field(lines[pos + 1], "k"));
    int n = static_cast<int>(expect_field(lines[pos + 2], "n"));
    std::uint64_t count = binom(n, k);
    need(4 + count);
    std::string text;
    for (std::size_t i = pos; i < pos + 4 + count; ++i) text += lines[i] + "\n";
    pos += 4 + count;
    return read_kof(text);
  }
  expect_line(lines[pos++], "KOS 1");
  need(3);
  std::string tag_line = lines[pos++];
  if (tag_line.rfind("tag ", 0) != 0) throw FormatError("expected 'tag <name>'");
  std::string tag = tag_line.substr(4);
  int k = static_cast<int>(expect_field(lines[pos++], "k"));
  int n = static_cast<int>(expect_field(lines[pos++], "n"));
  Ordering o;
  if (tag == "canonical") {
    need(1);
    if (lines[pos].rfind("spec ", 0) != 0) throw FormatError("expected 'spec ...'");
    CanonicalSpec spec;
    try {
      spec = CanonicalSpec::parse(lines[pos].substr(5));
      o = gen_canonical(k, n, spec);
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
    ++pos;
  } else if (tag == "stepup2") {
    need(2);
    int m = static_cast<int>(expect_field(lines[pos++], "m"));
    if (k != 2 || m < 1 || m > 30 || n != (1 << m)) throw FormatError("stepup2 needs k=2 and n=2^m");
    std::string g = lines[pos] == "colouring" ? "" : lines[pos].rfind("colouring ", 0) == 0 ? lines[pos].substr(10) : "?";
    ++pos;
    o = build_pair_ordering(m, PairColouring::parse(m, g));
  } else if (tag == "stepupk") {
    need(2);
    int m = static_cast<int>(expect_field(lines[pos++], "m"));
    if (m < 1 || m > 30 || n != (1 << m)) throw FormatError("stepupk needs n=2^m");
    expect_line(lines[pos++], "inner");
    Ordering inner = read_block(lines, pos);
    try {
      o = build_k_ordering(m, k, inner);
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  } else {
    throw FormatError("unknown KOS tag '" + tag + "'");
  }
  need(1);
  expect_line(lines[pos++], "end");
  return o;
}

}  // namespace kos_detail

inline std::string write_kos(const Ordering& o)
{
  std::string out;
  kos_detail::write_block(o, out);
  return out;
}

/// Reads either a KOF 1 table or a KOS 1 lazy description.
inline Ordering read_ordering(std::string_view text)
{
  auto lines = fmt_detail::split_lines(text);
  std::size_t pos = 0;
  Ordering o = kos_detail::read_block(lines, pos);
  if (pos != lines.size()) throw FormatError("trailing content after ordering");
  return o;
}

}  // namespace canon

#endif  // CANON_KOS_HPP
