#include "vfkit/system.hpp"

#include "vfkit/errors.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vfkit {

namespace {

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

// Cursor over one line of the file.
class Line {
public:
  Line(std::string_view text, int number) : text_(text), number_(number) {}

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, number_, static_cast<int>(at) + 1);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= text_.size();
  }
  std::size_t pos() const { return pos_; }
  void advance(std::size_t k) { pos_ += k; }
  std::string_view rest() const { return text_.substr(pos_); }

  std::string word() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  void keyword(std::string_view k) {
    skip_ws();
    const std::size_t start = pos_;
    if (word() != k) fail("expected '" + std::string(k) + "'", start);
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  // Text up to the matching close parenthesis, split at top-level commas.
  std::vector<std::pair<std::size_t, std::string_view>> tuple() {
    expect('(');
    std::vector<std::pair<std::size_t, std::string_view>> parts;
    std::size_t start = pos_;
    int depth = 0;
    for (; pos_ < text_.size(); ++pos_) {
      const char c = text_[pos_];
      if (c == '(') {
        ++depth;
      } else if (c == ')' && depth > 0) {
        --depth;
      } else if ((c == ',' || c == ')') && depth == 0) {
        parts.emplace_back(start, text_.substr(start, pos_ - start));
        start = pos_ + 1;
        if (c == ')') {
          ++pos_;
          return parts;
        }
      }
    }
    fail("unclosed '('");
  }

  std::string_view token() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

private:
  std::string_view text_;
  int number_;
  std::size_t pos_ = 0;
};

Inequality inequality(Line& line, std::size_t dim) {
  line.skip_ws();
  const std::size_t at = line.pos();
  const std::string var = line.word();
  int index = 0;
  if (var.size() < 2 || var[0] != 'x') line.fail("expected a variable x<i>", at);
  for (std::size_t k = 1; k < var.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(var[k]))) line.fail("expected a variable x<i>", at);
    index = index * 10 + (var[k] - '0');
    if (index > 1000000) line.fail("variable index out of range", at);
  }
  if (index < 1 || static_cast<std::size_t>(index) > dim)
    line.fail("variable " + var + " outside dimension " + std::to_string(dim), at);
  line.skip_ws();
  Inequality q;
  q.var = index;
  const std::string_view rel = line.rest().substr(0, 1);
  if (rel == "<") {
    q.rel = Inequality::Relation::Less;
  } else if (rel == ">") {
    q.rel = Inequality::Relation::Greater;
  } else {
    line.fail("expected '<' or '>'");
  }
  line.advance(1);
  line.skip_ws();
  const std::size_t bound_at = line.pos();
  const std::string_view bound = line.token();
  try {
    q.bound = parse_rational(bound);
  } catch (const std::exception&) {
    line.fail("expected a rational bound", bound_at);
  }
  return q;
}

} // namespace

const VectorField& System::field(std::string_view n) const {
  for (const auto& f : fields)
    if (f.name() == n) return f;
  throw std::out_of_range("unknown field '" + std::string(n) + "' in system " + name);
}

std::vector<VectorField> System::select(std::string_view names) const {
  if (names.empty()) return fields;
  std::vector<VectorField> out;
  std::size_t start = 0;
  while (start <= names.size()) {
    std::size_t end = names.find(',', start);
    if (end == std::string_view::npos) end = names.size();
    std::string_view n = names.substr(start, end - start);
    while (!n.empty() && std::isspace(static_cast<unsigned char>(n.front()))) n.remove_prefix(1);
    while (!n.empty() && std::isspace(static_cast<unsigned char>(n.back()))) n.remove_suffix(1);
    out.push_back(field(n));
    start = end + 1;
  }
  return out;
}

std::string System::str() const {
  std::string s = "system " + name + " dim " + std::to_string(dim) + "\n";
  for (const auto& f : fields) {
    s += "field " + f.name() + " = (";
    for (std::size_t i = 0; i < f.components().size(); ++i) {
      if (i) s += ", ";
      s += f.components()[i].str();
    }
    s += ")";
    if (!f.domain().is_everything()) s += " on " + f.domain().str();
    s += "\n";
  }
  return s;
}

System parse_system(std::string_view text) {
  System sys;
  bool header = false;
  int number = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    start = end + 1;
    ++number;
    Line line(raw, number);
    if (line.done() || line.rest().front() == '#') continue;

    if (!header) {
      line.keyword("system");
      sys.name = std::string(line.token());
      if (sys.name.empty()) line.fail("expected a system name");
      line.keyword("dim");
      line.skip_ws();
      const std::size_t at = line.pos();
      const std::string_view n = line.token();
      std::size_t dim = 0;
      for (char c : n) {
        if (!std::isdigit(static_cast<unsigned char>(c)) || dim > 1000) line.fail("expected a dimension", at);
        dim = dim * 10 + static_cast<std::size_t>(c - '0');
      }
      if (n.empty() || dim == 0) line.fail("expected a positive dimension", at);
      sys.dim = dim;
      if (!line.done()) line.fail("unexpected text after header");
      header = true;
      continue;
    }

    line.keyword("field");
    line.skip_ws();
    const std::size_t name_at = line.pos();
    const std::string fname = line.word();
    for (const auto& f : sys.fields)
      if (f.name() == fname) line.fail("duplicate field '" + fname + "'", name_at);
    line.expect('=');
    line.skip_ws();
    const std::size_t tuple_at = line.pos();
    auto parts = line.tuple();
    if (parts.size() != sys.dim)
      line.fail("field " + fname + " has " + std::to_string(parts.size()) + " components, expected " +
                    std::to_string(sys.dim),
                tuple_at);
    std::vector<Expr> comps;
    for (const auto& [offset, src] : parts) {
      try {
        comps.push_back(parse_expr(src, static_cast<int>(sys.dim)));
      } catch (const ParseError& e) {
        throw ParseError(e.message(), number, static_cast<int>(offset) + e.column());
      }
    }
    std::vector<Inequality> ineqs;
    if (!line.done()) {
      line.keyword("on");
      ineqs.push_back(inequality(line, sys.dim));
      while (!line.done()) {
        line.keyword("and");
        ineqs.push_back(inequality(line, sys.dim));
      }
    }
    sys.fields.emplace_back(fname, std::move(comps), DomainPredicate(std::move(ineqs)));
  }
  if (!header) throw ParseError("missing 'system <name> dim <n>' header", number == 0 ? 1 : number, 1);
  if (sys.fields.empty()) throw ParseError("system declares no fields", number, 1);
  return sys;
}

System load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read system file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

} // namespace vfkit
