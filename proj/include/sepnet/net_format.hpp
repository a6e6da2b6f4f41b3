#pragma once

// Text format for net documents. The grammar is documented in
// docs/net-format.md; parse() returns the canonical form, and serialize()
// prints it, so serialize(parse(t)) == t for canonical text t.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sepnet/model.hpp"

namespace sepnet {

namespace format_detail {

enum class Tok { LBrace, RBrace, LBracket, RBracket, LParen, RParen, Comma, Colon, Gt, Tilde, At, Arrow, Word, String, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

inline bool is_word_char(char c) {
  switch (c) {
    case '{': case '}': case '[': case ']': case '(': case ')':
    case ',': case ':': case '>': case '~': case '@': case '<':
    case '"': case '#': case ' ': case '\t': case '\r': case '\n':
      return false;
    default:
      return true;
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      switch (c) {
        case '{': t.kind = Tok::LBrace; advance(); break;
        case '}': t.kind = Tok::RBrace; advance(); break;
        case '[': t.kind = Tok::LBracket; advance(); break;
        case ']': t.kind = Tok::RBracket; advance(); break;
        case '(': t.kind = Tok::LParen; advance(); break;
        case ')': t.kind = Tok::RParen; advance(); break;
        case ',': t.kind = Tok::Comma; advance(); break;
        case ':': t.kind = Tok::Colon; advance(); break;
        case '>': t.kind = Tok::Gt; advance(); break;
        case '~': t.kind = Tok::Tilde; advance(); break;
        case '@': t.kind = Tok::At; advance(); break;
        case '<':
          if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
            t.kind = Tok::Arrow;
            advance();
            advance();
          } else {
            throw ParseError(line_, col_, "unexpected '<' (did you mean '<-'?)");
          }
          break;
        case '"':
          t.kind = Tok::String;
          t.text = read_string();
          break;
        default:
          t.kind = Tok::Word;
          while (pos_ < src_.size() && is_word_char(src_[pos_])) {
            t.text += src_[pos_];
            advance();
          }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        return;
      }
    }
  }

  std::string read_string() {
    auto line = line_, col = col_;
    advance();  // opening quote
    std::string out;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '"') {
        advance();
        return out;
      }
      if (c == '\n') break;
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) break;
        char e = src_[pos_];
        if (e == 'n') out += '\n';
        else if (e == '"' || e == '\\') out += e;
        else throw ParseError(line_, col_, std::string("unknown escape '\\") + e + "'");
        advance();
        continue;
      }
      out += c;
      advance();
    }
    throw ParseError(line, col, "unterminated string");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

struct Positioned {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct RawVariable {
  Positioned name;
  VariableSpec spec;
  std::vector<Positioned> parents;
};

struct RawStatement {
  std::vector<Positioned> context;
  std::vector<std::vector<Positioned>> strata;
  std::optional<double> annotation;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct RawEfEntry {
  std::vector<Positioned> context;
  double value = 0;
};

struct RawTable {
  Positioned owner;
  std::vector<RawStatement> statements;
};

struct RawEf {
  Positioned owner;
  std::vector<RawEfEntry> entries;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  NetDocument run() {
    std::set<std::string> sections;
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (t.kind != Tok::Word) fail(t, "expected a section keyword");
      if (!sections.insert(t.text).second) fail(t, "section '" + t.text + "' given twice");
      if (t.text == "net") {
        next();
        net_.name = expect_name("net name").text;
      } else if (t.text == "description") {
        next();
        net_.description = expect_name("description").text;
      } else if (t.text == "variables") {
        next();
        parse_variables();
      } else if (t.text == "cptables") {
        next();
        parse_cptables();
      } else if (t.text == "evalfunctions") {
        next();
        parse_evalfunctions();
      } else {
        fail(t, "unknown section '" + t.text + "'");
      }
    }
    resolve();
    return std::move(net_);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw ParseError(t.line, t.column, msg); }
  [[noreturn]] static void fail(const Positioned& p, const std::string& msg) {
    throw ParseError(p.line, p.column, msg);
  }

  static std::string_view describe(Tok k) {
    switch (k) {
      case Tok::LBrace: return "'{'";
      case Tok::RBrace: return "'}'";
      case Tok::LBracket: return "'['";
      case Tok::RBracket: return "']'";
      case Tok::LParen: return "'('";
      case Tok::RParen: return "')'";
      case Tok::Comma: return "','";
      case Tok::Colon: return "':'";
      case Tok::Gt: return "'>'";
      case Tok::Tilde: return "'~'";
      case Tok::At: return "'@'";
      case Tok::Arrow: return "'<-'";
      case Tok::Word: return "a name";
      case Tok::String: return "a string";
      case Tok::End: return "end of input";
    }
    return "?";
  }

  const Token& expect(Tok k) {
    if (peek().kind != k) fail(peek(), "expected " + std::string(describe(k)) + ", found " + found(peek()));
    return next();
  }

  static std::string found(const Token& t) {
    if (t.kind == Tok::Word) return "'" + t.text + "'";
    return std::string(describe(t.kind));
  }

  Positioned expect_name(const char* what) {
    const Token& t = peek();
    if (t.kind != Tok::Word && t.kind != Tok::String) fail(t, std::string("expected ") + what + ", found " + found(t));
    next();
    return {t.text, t.line, t.column};
  }

  double expect_number(const char* what) {
    const Token& t = peek();
    if (t.kind != Tok::Word) fail(t, std::string("expected ") + what + ", found " + found(t));
    auto v = detail::parse_number(t.text);
    if (!v || !std::isfinite(*v)) fail(t, "'" + t.text + "' is not a number");
    next();
    return *v;
  }

  bool at_name() const { return peek().kind == Tok::Word || peek().kind == Tok::String; }

  void parse_variables() {
    expect(Tok::LBrace);
    while (peek().kind != Tok::RBrace) {
      RawVariable raw;
      raw.name = expect_name("variable name");
      raw.spec.name = raw.name.text;
      expect(Tok::Colon);
      const Token& cls = peek();
      if (cls.kind != Tok::Word) fail(cls, "expected a variable class, found " + found(cls));
      auto vc = parse_var_class(cls.text);
      if (!vc) fail(cls, "unknown variable class '" + cls.text + "' (scenario, evaluation, preference)");
      next();
      raw.spec.var_class = *vc;
      if (*vc == VarClass::Evaluation) {
        expect(Tok::LBracket);
        raw.spec.range.min = expect_number("range minimum");
        expect(Tok::Comma);
        raw.spec.range.max = expect_number("range maximum");
        expect(Tok::RBracket);
        if (peek().kind == Tok::Word && peek().text == "buckets") {
          next();
          expect(Tok::LParen);
          BucketBounds b{};
          b[0] = expect_number("bucket boundary");
          expect(Tok::Comma);
          b[1] = expect_number("bucket boundary");
          expect(Tok::Comma);
          b[2] = expect_number("bucket boundary");
          expect(Tok::RParen);
          raw.spec.buckets = b;
        }
      } else {
        expect(Tok::LBrace);
        if (peek().kind != Tok::RBrace) {
          raw.spec.labels.push_back(expect_name("value label").text);
          while (peek().kind == Tok::Comma) {
            next();
            raw.spec.labels.push_back(expect_name("value label").text);
          }
        }
        expect(Tok::RBrace);
      }
      if (peek().kind == Tok::Arrow) {
        next();
        raw.parents.push_back(expect_name("parent name"));
        while (peek().kind == Tok::Comma) {
          next();
          raw.parents.push_back(expect_name("parent name"));
        }
      }
      vars_.push_back(std::move(raw));
    }
    expect(Tok::RBrace);
  }

  std::vector<Positioned> parse_context() {
    std::vector<Positioned> ctx;
    if (peek().kind == Tok::Colon) return ctx;
    ctx.push_back(expect_name("context label"));
    while (peek().kind == Tok::Comma) {
      next();
      ctx.push_back(expect_name("context label"));
    }
    return ctx;
  }

  void parse_cptables() {
    expect(Tok::LBrace);
    while (peek().kind != Tok::RBrace) {
      RawTable table;
      table.owner = expect_name("variable name");
      expect(Tok::LBrace);
      while (peek().kind != Tok::RBrace) {
        RawStatement st;
        st.line = peek().line;
        st.column = peek().column;
        st.context = parse_context();
        expect(Tok::Colon);
        st.strata.emplace_back();
        st.strata.back().push_back(expect_name("value"));
        while (peek().kind == Tok::Gt || peek().kind == Tok::Tilde) {
          bool new_stratum = next().kind == Tok::Gt;
          if (new_stratum) st.strata.emplace_back();
          st.strata.back().push_back(expect_name("value"));
        }
        if (peek().kind == Tok::At) {
          next();
          st.annotation = expect_number("annotation");
        }
        table.statements.push_back(std::move(st));
      }
      expect(Tok::RBrace);
      tables_.push_back(std::move(table));
    }
    expect(Tok::RBrace);
  }

  void parse_evalfunctions() {
    expect(Tok::LBrace);
    while (peek().kind != Tok::RBrace) {
      RawEf ef;
      ef.owner = expect_name("variable name");
      expect(Tok::LBrace);
      while (peek().kind != Tok::RBrace) {
        RawEfEntry e;
        e.context = parse_context();
        expect(Tok::Colon);
        e.value = expect_number("estimate");
        ef.entries.push_back(std::move(e));
      }
      expect(Tok::RBrace);
      efs_.push_back(std::move(ef));
    }
    expect(Tok::RBrace);
  }

  /// Context as label indices, validated against the parents of `var`.
  std::vector<std::size_t> resolve_context(const VariableSpec& var, const std::vector<Positioned>& ctx,
                                           const Positioned& where) {
    if (ctx.size() != var.parents.size())
      fail(ctx.empty() ? where : ctx.front(),
           "context has " + std::to_string(ctx.size()) + " labels but '" + var.name + "' has " +
               std::to_string(var.parents.size()) + " parents");
    std::vector<std::size_t> key;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      const auto* parent = net_.find(var.parents[i]);
      auto labels = context_labels(*parent);
      auto it = std::find(labels.begin(), labels.end(), ctx[i].text);
      if (it == labels.end())
        fail(ctx[i], "'" + ctx[i].text + "' is not a value of parent '" + parent->name + "'" +
                         (parent->discrete() ? "" : " (use a bucket label Q1..Q4)"));
      key.push_back(static_cast<std::size_t>(it - labels.begin()));
    }
    return key;
  }

  void resolve() {
    std::set<std::string> names;
    for (const auto& raw : vars_) {
      if (!names.insert(raw.name.text).second) fail(raw.name, "duplicate variable '" + raw.name.text + "'");
      net_.variables.push_back(raw.spec);
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      for (const auto& p : vars_[i].parents) {
        if (!names.count(p.text)) fail(p, "unknown parent '" + p.text + "' of '" + vars_[i].name.text + "'");
        net_.variables[i].parents.push_back(p.text);
      }
    }

    for (const auto& table : tables_) {
      const auto* var = net_.find(table.owner.text);
      if (!var) fail(table.owner, "cp-table for unknown variable '" + table.owner.text + "'");
      if (net_.cp_tables.count(var->name)) fail(table.owner, "second cp-table for '" + var->name + "'");
      std::vector<std::pair<std::vector<std::size_t>, CpStatement>> rows;
      for (const auto& st : table.statements) {
        Positioned where{"", st.line, st.column};
        auto key = resolve_context(*var, st.context, where);
        CpStatement out;
        for (const auto& c : st.context) out.context.push_back(c.text);
        for (const auto& stratum : st.strata) {
          std::vector<std::pair<std::size_t, std::string>> vals;
          for (const auto& v : stratum) {
            auto idx = var->label_index(v.text);
            if (!idx) fail(v, "'" + v.text + "' is not a value of '" + var->name + "'");
            vals.emplace_back(*idx, v.text);
          }
          std::sort(vals.begin(), vals.end());
          Stratum s;
          for (auto& [_, label] : vals) s.push_back(std::move(label));
          out.strata.push_back(std::move(s));
        }
        out.annotation = st.annotation;
        rows.emplace_back(std::move(key), std::move(out));
      }
      std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      auto& dest = net_.cp_tables[var->name];
      for (auto& r : rows) dest.push_back(std::move(r.second));
    }

    for (const auto& ef : efs_) {
      const auto* var = net_.find(ef.owner.text);
      if (!var) fail(ef.owner, "evaluation function for unknown variable '" + ef.owner.text + "'");
      if (net_.eval_functions.count(var->name)) fail(ef.owner, "second evaluation function for '" + var->name + "'");
      std::vector<std::pair<std::vector<std::size_t>, EvalEntry>> rows;
      for (const auto& e : ef.entries) {
        auto key = resolve_context(*var, e.context, ef.owner);
        EvalEntry out;
        for (const auto& c : e.context) out.context.push_back(c.text);
        out.value = e.value;
        rows.emplace_back(std::move(key), std::move(out));
      }
      std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      auto& dest = net_.eval_functions[var->name];
      dest.owner = var->name;
      for (auto& r : rows) dest.table.push_back(std::move(r.second));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  NetDocument net_;
  std::vector<RawVariable> vars_;
  std::vector<RawTable> tables_;
  std::vector<RawEf> efs_;
};

inline std::string quote_if_needed(std::string_view s) {
  // "buckets" is quoted so a variable of that name cannot be read as a bucket clause.
  bool bare = !s.empty() && std::all_of(s.begin(), s.end(), is_word_char) && s != "buckets";
  if (bare) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

inline std::string format_context(const std::vector<std::string>& ctx) {
  std::string out;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (i) out += ", ";
    out += quote_if_needed(ctx[i]);
  }
  return out;
}

}  // namespace format_detail

/// Parses a net document. Throws ParseError (with line and column) on syntax
/// errors, duplicate variables, unknown parents and labels outside a domain.
/// Structural problems that the document can still represent (cycles, class
/// layering, duplicate contexts, out-of-range estimates) are left to validate().
inline NetDocument parse_net(std::string_view text) {
  format_detail::Lexer lexer(text);
  format_detail::Parser parser(lexer.run());
  return parser.run();
}

/// Canonical text for `net`; byte-deterministic.
inline std::string serialize_net(const NetDocument& net) {
  using format_detail::format_context;
  using format_detail::quote_if_needed;
  std::string out;
  if (!net.name.empty()) out += "net " + quote_if_needed(net.name) + "\n";
  if (!net.description.empty()) out += "description " + quote_if_needed(net.description) + "\n";
  if (!out.empty()) out += "\n";

  out += "variables {\n";
  for (const auto& v : net.variables) {
    out += "  " + quote_if_needed(v.name) + " : " + std::string(to_string(v.var_class)) + " ";
    if (v.discrete()) {
      out += "{";
      for (std::size_t i = 0; i < v.labels.size(); ++i) out += (i ? ", " : "") + quote_if_needed(v.labels[i]);
      out += "}";
    } else {
      out += "[" + detail::format_number(v.range.min) + ", " + detail::format_number(v.range.max) + "]";
      if (v.buckets)
        out += " buckets (" + detail::format_number((*v.buckets)[0]) + ", " + detail::format_number((*v.buckets)[1]) +
               ", " + detail::format_number((*v.buckets)[2]) + ")";
    }
    if (!v.parents.empty()) out += " <- " + format_context(v.parents);
    out += "\n";
  }
  out += "}\n";

  // Tables in declaration order, then any whose owner is undeclared.
  std::vector<std::string> order;
  for (const auto& v : net.variables) order.push_back(v.name);

  auto emit_ordered = [&](const auto& tables, auto&& emit) {
    std::set<std::string> done;
    for (const auto& name : order)
      if (auto it = tables.find(name); it != tables.end()) {
        emit(it->first, it->second);
        done.insert(name);
      }
    for (const auto& [name, t] : tables)
      if (!done.count(name)) emit(name, t);
  };

  if (!net.cp_tables.empty()) {
    out += "\ncptables {\n";
    emit_ordered(net.cp_tables, [&](const std::string& name, const std::vector<CpStatement>& table) {
      out += "  " + quote_if_needed(name) + " {\n";
      for (const auto& st : table) {
        if (st.strata.empty()) continue;  // says nothing; same as an absent statement
        out += "    ";
        if (!st.context.empty()) out += format_context(st.context) + " ";
        out += ":";
        for (std::size_t s = 0; s < st.strata.size(); ++s) {
          out += s ? " > " : " ";
          for (std::size_t k = 0; k < st.strata[s].size(); ++k)
            out += (k ? " ~ " : "") + quote_if_needed(st.strata[s][k]);
        }
        if (st.annotation) out += " @ " + detail::format_number(*st.annotation);
        out += "\n";
      }
      out += "  }\n";
    });
    out += "}\n";
  }

  if (!net.eval_functions.empty()) {
    out += "\nevalfunctions {\n";
    emit_ordered(net.eval_functions, [&](const std::string& name, const EvaluationFunction& ef) {
      out += "  " + quote_if_needed(name) + " {\n";
      for (const auto& e : ef.table) {
        out += "    ";
        if (!e.context.empty()) out += format_context(e.context) + " ";
        out += ": " + detail::format_number(e.value) + "\n";
      }
      out += "  }\n";
    });
    out += "}\n";
  }
  return out;
}

}  // namespace sepnet
