#include "dptlab/io.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "dptlab/error.hpp"

namespace dptlab::io {

namespace {

struct Token {
  std::string text;
  int line = 0;
  int column = 0;
};

using Line = std::vector<Token>;

// Splits into non-empty lines of whitespace-separated tokens.
std::vector<Line> lex(std::string_view text) {
  std::vector<Line> lines;
  int line_no = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line tokens;
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      const std::size_t start = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      if (i > start) tokens.push_back({std::string(raw.substr(start, i - start)), line_no, static_cast<int>(start) + 1});
    }
    if (!tokens.empty()) lines.push_back(std::move(tokens));
    pos = end + 1;
    ++line_no;
  }
  return lines;
}

[[noreturn]] void fail(const Token& t, const std::string& message) { throw ParseError(message, t.line, t.column); }
[[noreturn]] void fail_at_end(const std::vector<Line>& lines, const std::string& message) {
  if (lines.empty()) throw ParseError(message, 1, 1);
  const Token& t = lines.back().back();
  throw ParseError(message, t.line, t.column + static_cast<int>(t.text.size()));
}

long to_long(const Token& t, long lo, long hi, const char* what) {
  long v = 0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) fail(t, std::string("expected an integer ") + what + ", got '" + t.text + "'");
  if (v < lo || v > hi)
    fail(t, std::string(what) + " " + t.text + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

// Reads `key <value>` from a header line.
long header_value(const Line& line, std::size_t at, const char* key, long lo, long hi) {
  if (line.size() <= at + 1) fail(line.back(), std::string("missing value after '") + key + "'");
  if (line[at].text != key) fail(line[at], std::string("expected '") + key + "', got '" + line[at].text + "'");
  return to_long(line[at + 1], lo, hi, key);
}

std::vector<Token> flatten(const std::vector<Line>& lines, std::size_t from) {
  std::vector<Token> out;
  for (std::size_t i = from; i < lines.size(); ++i) out.insert(out.end(), lines[i].begin(), lines[i].end());
  return out;
}

int arity_for_count(const Token& t, std::size_t count) {
  if (count == 0 || (count & (count - 1)) != 0)
    fail(t, std::to_string(count) + " entries is not a power of two");
  const int n = std::countr_zero(count);
  if (n > kMaxArity) throw Error(ErrorKind::ArityCap, "arity " + std::to_string(n) + " over the cap");
  return n;
}

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  std::string s = buffer;
  // Keep floats recognizable as floats.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

// ---- function ---------------------------------------------------------------

BooleanTable parse_function(std::string_view text) {
  const auto lines = lex(text);
  if (lines.empty()) throw ParseError("empty function file", 1, 1);
  const Line& head = lines.front();
  const int n = static_cast<int>(header_value(head, 0, "n", 0, kMaxArity));
  const int codomain = static_cast<int>(header_value(head, 2, "B", 2, 1 << 16));
  if (head.size() > 4) fail(head[4], "unexpected token after header");
  const auto tokens = flatten(lines, 1);
  const std::size_t expected = std::size_t{1} << n;
  if (tokens.size() < expected)
    fail_at_end(lines, "expected " + std::to_string(expected) + " outputs, got " + std::to_string(tokens.size()));
  if (tokens.size() > expected) fail(tokens[expected], "more than " + std::to_string(expected) + " outputs");
  std::vector<std::uint32_t> values(expected);
  for (std::size_t x = 0; x < expected; ++x)
    values[x] = static_cast<std::uint32_t>(to_long(tokens[x], 0, codomain - 1, "output"));
  return BooleanTable(n, codomain, std::move(values));
}

std::string function_to_string(const BooleanTable& f) {
  std::ostringstream out;
  out << "n " << f.arity() << " B " << f.codomain() << "\n";
  for (std::uint32_t x = 0; x < f.size(); ++x) out << (x ? " " : "") << f(x);
  out << "\n";
  return out.str();
}

// ---- distribution -----------------------------------------------------------

Distribution parse_distribution(std::string_view text) {
  const auto lines = lex(text);
  if (lines.empty()) throw ParseError("empty distribution file", 1, 1);
  std::size_t from = 0;
  int n = -1;
  if (lines.front().front().text == "n") {
    n = static_cast<int>(header_value(lines.front(), 0, "n", 0, kMaxArity));
    if (lines.front().size() > 2) fail(lines.front()[2], "unexpected token after header");
    from = 1;
  }
  const auto tokens = flatten(lines, from);
  if (tokens.empty()) fail_at_end(lines, "no weights");
  if (n < 0) n = arity_for_count(tokens.front(), tokens.size());
  const std::size_t expected = std::size_t{1} << n;
  if (tokens.size() != expected)
    fail(tokens.size() > expected ? tokens[expected] : tokens.back(),
         "expected " + std::to_string(expected) + " weights, got " + std::to_string(tokens.size()));

  const Token* rational_seen = nullptr;
  const Token* decimal_seen = nullptr;
  for (const auto& t : tokens) {
    if (t.text.find('/') != std::string::npos) {
      rational_seen = &t;
    } else if (t.text.find_first_of(".eE") != std::string::npos) {
      decimal_seen = &t;
    }
    if (rational_seen && decimal_seen)
      fail(t, "mixed rational and decimal weights (first decimal at line " + std::to_string(decimal_seen->line) +
                  ", first rational at line " + std::to_string(rational_seen->line) + ")");
  }

  try {
    if (!decimal_seen) {
      std::vector<Rational> w(expected);
      for (std::size_t x = 0; x < expected; ++x) {
        try {
          w[x] = parse_rational(tokens[x].text);
        } catch (const ParseError&) {
          fail(tokens[x], "malformed weight '" + tokens[x].text + "'");
        }
      }
      return InputDistribution<Rational>(n, std::move(w));
    }
    std::vector<double> w(expected);
    for (std::size_t x = 0; x < expected; ++x) {
      const auto& t = tokens[x];
      const char* first = t.text.data();
      const char* last = first + t.text.size();
      auto [ptr, ec] = std::from_chars(first, last, w[x]);
      if (ec != std::errc() || ptr != last) fail(t, "malformed weight '" + t.text + "'");
    }
    return InputDistribution<double>(n, std::move(w));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    // Negative weights or a bad total: point at the first weight.
    fail(tokens.front(), e.what());
  }
}

std::string distribution_to_string(const InputDistribution<Rational>& mu) {
  std::ostringstream out;
  out << "n " << mu.arity() << "\n";
  for (std::uint32_t x = 0; x < mu.size(); ++x) out << (x ? " " : "") << to_string(mu[x]);
  out << "\n";
  return out.str();
}

std::string distribution_to_string(const InputDistribution<double>& mu) {
  std::ostringstream out;
  out << "n " << mu.arity() << "\n";
  for (std::uint32_t x = 0; x < mu.size(); ++x) out << (x ? " " : "") << format_double(mu[x]);
  out << "\n";
  return out.str();
}

int arity_of(const Distribution& mu) {
  return std::visit([](const auto& d) { return d.arity(); }, mu);
}

// ---- relation ---------------------------------------------------------------

RelationTable parse_relation(std::string_view text) {
  const auto lines = lex(text);
  if (lines.empty()) throw ParseError("empty relation file", 1, 1);
  const Line& head = lines.front();
  const int n = static_cast<int>(header_value(head, 0, "n", 0, kMaxArity));
  const int codomain = static_cast<int>(header_value(head, 2, "B", 2, 1 << 16));
  if (head.size() > 4) fail(head[4], "unexpected token after header");
  const std::size_t expected = std::size_t{1} << n;
  if (lines.size() - 1 != expected) {
    const std::string msg = "expected " + std::to_string(expected) + " input lines, got " + std::to_string(lines.size() - 1);
    if (lines.size() - 1 > expected) fail(lines[expected + 1].front(), msg);
    fail_at_end(lines, msg);
  }
  std::vector<char> accepted(expected * static_cast<std::size_t>(codomain), 0);
  for (std::size_t x = 0; x < expected; ++x)
    for (const auto& t : lines[x + 1]) {
      const long b = to_long(t, 0, codomain - 1, "output");
      accepted[x * static_cast<std::size_t>(codomain) + static_cast<std::size_t>(b)] = 1;
    }
  return RelationTable(n, codomain, std::move(accepted));
}

std::string relation_to_string(const RelationTable& p) {
  std::ostringstream out;
  out << "n " << p.arity() << " B " << p.codomain() << "\n";
  for (std::uint32_t x = 0; x < (1u << p.arity()); ++x) {
    bool first = true;
    for (int b = 0; b < p.codomain(); ++b)
      if (p.contains(x, b)) {
        out << (first ? "" : " ") << b;
        first = false;
      }
    out << "\n";
  }
  return out.str();
}

// ---- search set -------------------------------------------------------------

SearchSet parse_search_set(std::string_view text) {
  const auto lines = lex(text);
  std::size_t from = 0;
  int n = -1;
  if (!lines.empty() && lines.front().front().text == "n") {
    n = static_cast<int>(header_value(lines.front(), 0, "n", 0, kMaxArity));
    if (lines.front().size() > 2) fail(lines.front()[2], "unexpected token after header");
    from = 1;
  }
  std::vector<PartialAssignment> witnesses;
  for (std::size_t i = from; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.size() != 1) fail(line[1], "one witness per line");
    const Token& t = line.front();
    if (t.text == "-") {  // the empty witness of a 0-bit problem
      if (n < 0) n = 0;
      if (n != 0) fail(t, "'-' is only a witness when n = 0");
      witnesses.emplace_back(0);
      continue;
    }
    for (std::size_t c = 0; c < t.text.size(); ++c)
      if (t.text[c] != '0' && t.text[c] != '1' && t.text[c] != '*')
        throw ParseError("witness characters must be 0, 1 or *", t.line, t.column + static_cast<int>(c));
    if (t.text.size() > static_cast<std::size_t>(kMaxArity)) fail(t, "witness longer than the arity cap");
    if (n < 0) n = static_cast<int>(t.text.size());
    if (static_cast<int>(t.text.size()) != n)
      fail(t, "witness has " + std::to_string(t.text.size()) + " characters, expected " + std::to_string(n));
    witnesses.push_back(PartialAssignment::parse(t.text));
  }
  if (n < 0) throw ParseError("empty search set needs an 'n <arity>' header", 1, 1);
  return SearchSet(n, std::move(witnesses));
}

std::string search_set_to_string(const SearchSet& v) {
  std::string out = "n " + std::to_string(v.arity()) + "\n";
  for (const auto& w : v.witnesses()) out += (v.arity() == 0 ? std::string("-") : w.to_string()) + "\n";
  return out;
}

// ---- family -----------------------------------------------------------------

MonotoneFamily parse_family(std::string_view text) {
  const auto lines = lex(text);
  std::size_t from = 0;
  int k = -1;
  if (!lines.empty() && lines.front().front().text == "k") {
    k = static_cast<int>(header_value(lines.front(), 0, "k", 0, kMaxFamilyK));
    if (lines.front().size() > 2) fail(lines.front()[2], "unexpected token after header");
    from = 1;
  }
  std::vector<char> members;
  for (std::size_t i = from; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.size() != 1) fail(line[1], "one subset per line");
    const Token& t = line.front();
    if (k < 0) {
      if (t.text.size() > static_cast<std::size_t>(kMaxFamilyK)) fail(t, "subset longer than the family cap");
      k = static_cast<int>(t.text.size());
    }
    if (members.empty()) members.assign(std::size_t{1} << k, 0);
    if (static_cast<int>(t.text.size()) != k)
      fail(t, "subset has " + std::to_string(t.text.size()) + " characters, expected " + std::to_string(k));
    Subset s = 0;
    for (int j = 0; j < k; ++j) {
      const char c = t.text[static_cast<std::size_t>(j)];
      if (c != '0' && c != '1') throw ParseError("subset characters must be 0 or 1", t.line, t.column + j);
      if (c == '1') s |= Subset{1} << j;
    }
    members[s] = 1;
  }
  if (k < 0) throw ParseError("empty family needs a 'k <k>' header", 1, 1);
  if (members.empty()) members.assign(std::size_t{1} << k, 0);
  return MonotoneFamily(k, std::move(members));
}

std::string family_to_string(const MonotoneFamily& family) {
  std::string out = "k " + std::to_string(family.k()) + "\n";
  for (Subset s = 0; s < (Subset{1} << family.k()); ++s) {
    if (!family.contains(s)) continue;
    for (int j = 0; j < family.k(); ++j) out += (s >> j) & 1 ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace dptlab::io
