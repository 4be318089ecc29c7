// Problem ingestion. One constraint per line, '#' comments:
//   ineq := poly "<=" "0"
//   div  := integer "|" poly
//   poly := ["-"] term (("+"|"-") term)*
//   term := [integer ["*"]] ident | integer
#pragma once

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "liasat/config.hpp"
#include "liasat/problem.hpp"
#include "liasat/render.hpp"

namespace liasat {

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(int line_, int column_, std::string const& what_)
      : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                           std::to_string(column_) + ": " + what_),
        line(line_),
        column(column_) {}
};

struct ParsedProblem {
  Problem problem;
  VariablePool pool;
  VariableOrder order;
};

namespace detail {

class LineParser {
 public:
  LineParser(std::string_view text, int line_no, std::map<std::string, VarId>& var_ids,
             std::vector<std::string>& var_names)
      : text_(text), line_(line_no), vars_(var_ids), names_(var_names) {}

  // raw constraint; normalization happens once the order exists
  Constraint parse_constraint() {
    skip_ws();
    size_t mark = pos_;
    std::optional<Int> leading = try_integer();
    skip_ws();
    if (leading && !eof() && peek() == '|') {
      ++pos_;
      if (*leading == 0) throw error(static_cast<int>(mark) + 1, "zero modulus");
      LinearPolynomial p = parse_poly();
      expect_end();
      return Constraint::divisibility(*leading, std::move(p));
    }
    pos_ = mark;  // reparse as a polynomial
    LinearPolynomial p = parse_poly();
    skip_ws();
    if (!match("<=")) throw error(col(), "expected '<='");
    skip_ws();
    if (!match("0")) throw error(col(), "expected '0' on the right-hand side");
    expect_end();
    return Constraint::inequality(std::move(p));
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  int col() const { return static_cast<int>(pos_) + 1; }
  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  bool match(std::string_view s) {
    if (text_.substr(pos_, s.size()) != s) return false;
    pos_ += s.size();
    return true;
  }
  ParseError error(int column, std::string const& msg) const { return {line_, column, msg}; }

  void expect_end() {
    skip_ws();
    if (!eof()) throw error(col(), "unexpected trailing input");
  }

  std::optional<Int> try_integer() {
    skip_ws();
    size_t start = pos_;
    bool neg = false;
    if (!eof() && (peek() == '-' || peek() == '+')) {
      neg = peek() == '-';
      ++pos_;
      skip_ws();
    }
    if (eof() || !std::isdigit(static_cast<unsigned char>(peek()))) {
      pos_ = start;
      return std::nullopt;
    }
    std::string digits;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) digits += text_[pos_++];
    Int v(digits);
    return neg ? -v : v;
  }

  std::optional<std::string> try_ident() {
    skip_ws();
    if (eof()) return std::nullopt;
    char c = peek();
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') return std::nullopt;
    std::string name;
    while (!eof()) {
      c = peek();
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') break;
      name += c;
      ++pos_;
    }
    return name;
  }

  VarId intern(std::string const& name) {
    auto it = vars_.find(name);
    if (it != vars_.end()) return it->second;
    VarId id = static_cast<VarId>(names_.size());
    vars_.emplace(name, id);
    names_.push_back(name);
    return id;
  }

  LinearPolynomial parse_poly() {
    LinearPolynomial p;
    bool first = true;
    for (;;) {
      skip_ws();
      Int sign = 1;
      if (!eof() && (peek() == '+' || peek() == '-')) {
        if (first && peek() == '+') throw error(col(), "unexpected '+'");
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        break;  // no further operator: end of polynomial
      }
      skip_ws();
      int term_col = col();
      std::optional<Int> coeff = try_unsigned_integer();
      if (coeff) {
        skip_ws();
        bool star = !eof() && peek() == '*';
        if (star) {
          ++pos_;
          skip_ws();
        }
        std::optional<std::string> id = try_ident();
        if (id) {
          p.add_term(intern(*id), sign * *coeff);
        } else if (star) {
          throw error(col(), "expected a variable after '*'");
        } else {
          p.add_constant(sign * *coeff);
        }
      } else {
        std::optional<std::string> id = try_ident();
        if (!id) throw error(term_col, "expected a term");
        p.add_term(intern(*id), sign);
      }
      first = false;
      skip_ws();
      if (!eof() && peek() == '*') throw error(col(), "nonlinear term");
    }
    if (first) throw error(col(), "expected a polynomial");
    return p;
  }

  std::optional<Int> try_unsigned_integer() {
    skip_ws();
    if (eof() || !std::isdigit(static_cast<unsigned char>(peek()))) return std::nullopt;
    std::string digits;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) digits += text_[pos_++];
    return Int(digits);
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_;
  std::map<std::string, VarId>& vars_;
  std::vector<std::string>& names_;
};

}  // namespace detail

/// Parses the text into a normalized problem. The variable order follows
/// the policy within each class, with every guarded variable below every
/// unguarded one.
inline ParsedProblem parse(std::string const& text,
                           OrderPolicy policy = OrderPolicy::declaration) {
  std::map<std::string, VarId> var_ids;
  std::vector<std::string> var_names;
  std::vector<Constraint> raw;

  int line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    ++line_no;
    if (size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    bool blank = true;
    for (char c : line)
      if (c != ' ' && c != '\t' && c != '\r') blank = false;
    if (!blank) {
      detail::LineParser lp(line, line_no, var_ids, var_names);
      raw.push_back(lp.parse_constraint());
    }
    if (end == text.size()) break;
    start = end + 1;
  }

  ParsedProblem out;
  for (auto const& name : var_names) out.pool.create(name);

  // Guardedness on the raw constraints, then the class-partitioned order.
  Problem scratch;
  for (auto const& c : raw) scratch.add(c);
  std::vector<VarId> guarded, unguarded;
  for (VarId v = 0; v < out.pool.size(); ++v)
    (scratch.is_guarded(v) ? guarded : unguarded).push_back(v);
  if (policy == OrderPolicy::lexicographic) {
    auto by_name = [&](VarId a, VarId b) { return out.pool.name(a) < out.pool.name(b); };
    std::sort(guarded.begin(), guarded.end(), by_name);
    std::sort(unguarded.begin(), unguarded.end(), by_name);
  }
  std::vector<VarId> ascending = guarded;
  ascending.insert(ascending.end(), unguarded.begin(), unguarded.end());
  out.order = VariableOrder(std::move(ascending), guarded.size());

  for (auto const& c : raw) out.problem.add(normalize(c, out.order));
  return out;
}

/// Replaces the order with an explicit ascending listing of all variables.
/// The guarded-below-unguarded partition must be respected.
inline void apply_explicit_order(ParsedProblem& parsed, std::vector<std::string> const& names) {
  std::map<std::string, VarId> by_name;
  for (VarId v = 0; v < parsed.pool.size(); ++v) by_name[parsed.pool.name(v)] = v;
  if (names.size() != static_cast<size_t>(parsed.pool.size()))
    throw std::domain_error("explicit order must list every variable exactly once");
  std::vector<VarId> ascending;
  for (auto const& n : names) {
    auto it = by_name.find(n);
    if (it == by_name.end()) throw std::domain_error("explicit order names unknown variable " + n);
    ascending.push_back(it->second);
  }
  size_t guarded_count = 0;
  for (VarId v : ascending) guarded_count += parsed.problem.is_guarded(v) ? 1 : 0;
  for (size_t i = 0; i < ascending.size(); ++i) {
    bool g = parsed.problem.is_guarded(ascending[i]);
    if (g != (i < guarded_count))
      throw std::domain_error("explicit order violates guarded-before-unguarded");
  }
  VariableOrder order(std::move(ascending), guarded_count);
  // Renormalize: divisibility sign depends on the top variable.
  Problem renorm;
  for (auto const& c : parsed.problem.constraints()) renorm.add(normalize(c, order));
  parsed.problem = std::move(renorm);
  parsed.order = std::move(order);
}

}  // namespace liasat
