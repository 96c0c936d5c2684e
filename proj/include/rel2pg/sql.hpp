#pragma once

#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rel2pg/errors.hpp"
#include "rel2pg/relational.hpp"
#include "rel2pg/value.hpp"

namespace rel2pg {

/// A SELECT item: alias.attr, alias.* (attr empty, star) or bare * (both empty).
struct SqlItem {
  std::string alias;
  std::string attr;
  bool star = false;

  friend bool operator==(const SqlItem&, const SqlItem&) = default;
};

struct SqlOperand {
  bool is_literal = false;
  std::string alias;  // may be empty before validation (unqualified column)
  std::string attr;
  Value literal;

  friend bool operator==(const SqlOperand&, const SqlOperand&) = default;

  static SqlOperand column(std::string alias_, std::string attr_) {
    return {false, std::move(alias_), std::move(attr_), Value::null()};
  }
  static SqlOperand lit(Value v) { return {true, "", "", std::move(v)}; }
};

struct SqlCondition {
  SqlOperand left;
  CmpOp op = CmpOp::Eq;
  SqlOperand right;

  friend bool operator==(const SqlCondition&, const SqlCondition&) = default;
};

struct SqlQuery {
  bool distinct = false;
  std::vector<SqlItem> items;
  std::vector<std::pair<std::string, std::string>> from;  // (relation, alias; alias may be empty)
  std::vector<SqlCondition> where;                        // conjunctive

  friend bool operator==(const SqlQuery&, const SqlQuery&) = default;
};

namespace sql_detail {

struct Token {
  enum Kind { Ident, Number, String, Punct, End } kind = End;
  std::string text;   // identifiers upper-cased separately when matched as keywords
  int line = 1, col = 1;
};

inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Ident;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) t.text += take();
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      t.kind = Token::Number;
      if (c == '-') t.text += take();
      bool dot = false, exp = false;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(d))) {
          t.text += take();
        } else if (d == '.' && !dot && !exp) {
          dot = true;
          t.text += take();
        } else if ((d == 'e' || d == 'E') && !exp) {
          exp = true;
          t.text += take();
          if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
            t.text += take();
        } else {
          break;
        }
      }
      return t;
    }
    if (c == '\'' || c == '"') {
      char quote = take();
      t.kind = Token::String;
      while (pos_ < text_.size() && text_[pos_] != quote) t.text += take();
      if (pos_ >= text_.size()) throw ParseError("unterminated string literal", t.line, t.col);
      take();  // closing quote
      return t;
    }
    t.kind = Token::Punct;
    t.text += take();
    if ((t.text == "<" && pos_ < text_.size() && (text_[pos_] == '=' || text_[pos_] == '>')) ||
        (t.text == ">" && pos_ < text_.size() && text_[pos_] == '='))
      t.text += take();
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      take();
  }
  char take() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

inline const std::set<std::string>& unsupported_keywords() {
  static const std::set<std::string> kw = {"OR",    "NOT",   "IN",    "GROUP", "ORDER",
                                           "HAVING", "UNION", "LIMIT", "JOIN",  "EXISTS",
                                           "BETWEEN", "LIKE", "INNER", "OUTER", "LEFT",
                                           "RIGHT"};
  return kw;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { advance(); }

  SqlQuery parse() {
    expect_keyword("SELECT");
    SqlQuery q;
    if (is_keyword("DISTINCT")) {
      advance();
      q.distinct = true;
    }
    q.items.push_back(parse_item());
    while (is_punct(",")) {
      advance();
      q.items.push_back(parse_item());
    }
    expect_keyword("FROM");
    q.from.push_back(parse_from_entry());
    while (is_punct(",")) {
      advance();
      q.from.push_back(parse_from_entry());
    }
    if (is_keyword("WHERE")) {
      advance();
      q.where.push_back(parse_condition());
      while (is_keyword("AND")) {
        advance();
        q.where.push_back(parse_condition());
      }
    }
    reject_unsupported();
    if (cur_.kind != Token::End && !is_punct(";"))
      throw ParseError("unexpected token '" + cur_.text + "'", cur_.line, cur_.col);
    return q;
  }

 private:
  SqlItem parse_item() {
    if (is_punct("*")) {
      advance();
      return SqlItem{"", "", true};
    }
    std::string first = expect_ident("select item");
    if (is_punct(".")) {
      advance();
      if (is_punct("*")) {
        advance();
        return SqlItem{first, "", true};
      }
      return SqlItem{first, expect_ident("attribute name"), false};
    }
    return SqlItem{"", first, false};  // unqualified, resolved at validation
  }

  std::pair<std::string, std::string> parse_from_entry() {
    std::string rel = expect_ident("relation name");
    std::string alias;
    if (is_keyword("AS")) {
      advance();
      alias = expect_ident("alias");
    } else if (cur_.kind == Token::Ident && !is_any_keyword()) {
      alias = cur_.text;
      advance();
    }
    return {rel, alias};
  }

  SqlCondition parse_condition() {
    reject_unsupported();
    SqlOperand left = parse_operand();
    CmpOp op = parse_op();
    SqlOperand right = parse_operand();
    // Canonical shape keeps the column on the left.
    if (left.is_literal && !right.is_literal) {
      std::swap(left, right);
      op = flip(op);
    }
    if (left.is_literal)
      throw ParseError("condition must reference at least one column", cur_.line, cur_.col);
    return {std::move(left), op, std::move(right)};
  }

  SqlOperand parse_operand() {
    reject_unsupported();
    if (cur_.kind == Token::Number) {
      std::string text = cur_.text;
      advance();
      if (text.find('.') != std::string::npos || text.find('e') != std::string::npos ||
          text.find('E') != std::string::npos)
        return SqlOperand::lit(Value::flt(std::stod(text)));
      return SqlOperand::lit(Value::integer(std::stoll(text)));
    }
    if (cur_.kind == Token::String) {
      std::string text = cur_.text;
      advance();
      return SqlOperand::lit(Value::str(text));
    }
    if (is_keyword("TRUE") || is_keyword("FALSE")) {
      bool b = is_keyword("TRUE");
      advance();
      return SqlOperand::lit(Value::boolean(b));
    }
    std::string first = expect_ident("column reference");
    if (is_punct(".")) {
      advance();
      return SqlOperand::column(first, expect_ident("attribute name"));
    }
    return SqlOperand::column("", first);
  }

  CmpOp parse_op() {
    reject_unsupported();
    if (cur_.kind != Token::Punct)
      throw ParseError("expected comparison operator", cur_.line, cur_.col);
    std::string p = cur_.text;
    advance();
    if (p == "=") return CmpOp::Eq;
    if (p == "<>") return CmpOp::Ne;
    if (p == "<") return CmpOp::Lt;
    if (p == "<=") return CmpOp::Le;
    if (p == ">") return CmpOp::Gt;
    if (p == ">=") return CmpOp::Ge;
    if (p == "!") throw ParseError("use <> for inequality", cur_.line, cur_.col);
    throw ParseError("unknown operator '" + p + "'", cur_.line, cur_.col);
  }

  static CmpOp flip(CmpOp op) {
    switch (op) {
      case CmpOp::Lt: return CmpOp::Gt;
      case CmpOp::Le: return CmpOp::Ge;
      case CmpOp::Gt: return CmpOp::Lt;
      case CmpOp::Ge: return CmpOp::Le;
      default: return op;
    }
  }

  void reject_unsupported() {
    if (cur_.kind == Token::Ident && unsupported_keywords().count(upper(cur_.text)))
      throw UnsupportedConstructError(upper(cur_.text));
    if (is_punct("(")) throw UnsupportedConstructError("subquery or parenthesized expression");
  }

  bool is_keyword(const std::string& kw) const {
    return cur_.kind == Token::Ident && upper(cur_.text) == kw;
  }
  bool is_any_keyword() const {
    static const std::set<std::string> kw = {"SELECT", "DISTINCT", "FROM", "WHERE",
                                             "AS",     "AND",      "TRUE", "FALSE"};
    return cur_.kind == Token::Ident &&
           (kw.count(upper(cur_.text)) || unsupported_keywords().count(upper(cur_.text)));
  }
  bool is_punct(const std::string& p) const {
    return cur_.kind == Token::Punct && cur_.text == p;
  }
  void expect_keyword(const std::string& kw) {
    if (!is_keyword(kw)) {
      reject_unsupported();
      throw ParseError("expected " + kw, cur_.line, cur_.col);
    }
    advance();
  }
  std::string expect_ident(const std::string& what) {
    reject_unsupported();
    if (cur_.kind != Token::Ident)
      throw ParseError("expected " + what, cur_.line, cur_.col);
    std::string s = cur_.text;
    advance();
    return s;
  }
  void advance() { cur_ = lexer_.next(); }

  Lexer lexer_;
  Token cur_;
};

}  // namespace sql_detail

/// Parses the supported SELECT-FROM-WHERE grammar. Names are not resolved
/// and literals not coerced; see validate_and_alias.
inline SqlQuery parse_sql(const std::string& text) {
  return sql_detail::Parser(text).parse();
}

namespace sql_detail {

inline void coerce_literal(Value& lit, AttrType target, const std::string& context) {
  if (lit.is_null()) return;
  AttrType have = *lit.type();
  if (have == target) return;
  if (have == AttrType::Integer && target == AttrType::Float) {
    lit = Value::flt(static_cast<double>(lit.as_int()));
    return;
  }
  if (have == AttrType::Float && target == AttrType::Integer) return;  // numeric compare
  if (have == AttrType::String && target == AttrType::Date) {
    if (auto d = parse_date(lit.as_str())) {
      lit = Value::date(*d);
      return;
    }
    throw SchemaError(context + ": '" + lit.as_str() + "' is not a date");
  }
  if (have == AttrType::String && target == AttrType::Object) {
    lit = Value::object(lit.as_str());
    return;
  }
  throw SchemaError(context + ": literal of type " + to_string(have) +
                    " is incompatible with attribute type " + to_string(target));
}

}  // namespace sql_detail

/// Resolves names against the schema, assigns deterministic aliases (r1,
/// r2, ... skipping collisions), expands * items, type-checks and coerces
/// literals. Returns the fully qualified query.
inline SqlQuery validate_and_alias(SqlQuery q, const RelationalSchema& schema) {
  std::set<std::string> used;
  for (auto& [rel, alias] : q.from) {
    if (!schema.find(rel)) throw SchemaError("unknown relation: " + rel);
    if (!alias.empty() && !used.insert(alias).second)
      throw SchemaError("duplicate alias: " + alias);
  }
  int counter = 1;
  for (auto& [rel, alias] : q.from) {
    if (alias.empty()) {
      std::string candidate;
      do {
        candidate = "r" + std::to_string(counter++);
      } while (used.count(candidate));
      alias = candidate;
      used.insert(alias);
    }
  }
  auto relation_of = [&](const std::string& alias) -> const Relation& {
    for (const auto& [rel, a] : q.from)
      if (a == alias) return schema.get(rel);
    throw SchemaError("alias " + alias + " is not declared in FROM");
  };
  auto resolve_column = [&](SqlOperand& op) -> AttrType {
    if (op.alias.empty()) {
      const Relation* found_rel = nullptr;
      std::string found_alias;
      for (const auto& [rel, a] : q.from) {
        const Relation& r = schema.get(rel);
        if (r.attr_index(op.attr)) {
          if (found_rel)
            throw SchemaError("ambiguous attribute: " + op.attr);
          found_rel = &r;
          found_alias = a;
        }
      }
      if (!found_rel) throw SchemaError("unknown attribute: " + op.attr);
      op.alias = found_alias;
      return *found_rel->attr_type(op.attr);
    }
    const Relation& r = relation_of(op.alias);
    auto t = r.attr_type(op.attr);
    if (!t) throw SchemaError("unknown attribute: " + op.alias + "." + op.attr);
    return *t;
  };

  // Star expansion keeps the declared attribute order.
  std::vector<SqlItem> items;
  for (auto& item : q.items) {
    if (item.star) {
      if (item.alias.empty()) {
        for (const auto& [rel, alias] : q.from)
          for (const auto& [a, t] : schema.get(rel).attributes) {
            (void)t;
            items.push_back(SqlItem{alias, a, false});
          }
      } else {
        const Relation& r = relation_of(item.alias);
        for (const auto& [a, t] : r.attributes) {
          (void)t;
          items.push_back(SqlItem{item.alias, a, false});
        }
      }
      continue;
    }
    SqlOperand op = SqlOperand::column(item.alias, item.attr);
    resolve_column(op);
    items.push_back(SqlItem{op.alias, op.attr, false});
  }
  q.items = std::move(items);

  for (auto& cond : q.where) {
    AttrType lt = resolve_column(cond.left);
    if (cond.right.is_literal) {
      sql_detail::coerce_literal(cond.right.literal, lt,
                                 cond.left.alias + "." + cond.left.attr);
    } else {
      AttrType rt = resolve_column(cond.right);
      bool numeric = (lt == AttrType::Integer || lt == AttrType::Float) &&
                     (rt == AttrType::Integer || rt == AttrType::Float);
      if (lt != rt && !numeric)
        throw SchemaError("type-incompatible comparison: " + cond.left.alias + "." +
                          cond.left.attr + " (" + to_string(lt) + ") vs " +
                          cond.right.alias + "." + cond.right.attr + " (" + to_string(rt) +
                          ")");
    }
  }
  return q;
}

/// Debugging pretty-printer; parse(render(parse(x))) is a fixpoint.
inline std::string render_sql(const SqlQuery& q) {
  std::string out = "SELECT ";
  if (q.distinct) out += "DISTINCT ";
  for (std::size_t i = 0; i < q.items.size(); ++i) {
    if (i) out += ", ";
    const auto& item = q.items[i];
    if (item.star)
      out += item.alias.empty() ? "*" : item.alias + ".*";
    else
      out += item.alias.empty() ? item.attr : item.alias + "." + item.attr;
  }
  out += " FROM ";
  for (std::size_t i = 0; i < q.from.size(); ++i) {
    if (i) out += ", ";
    out += q.from[i].first;
    if (!q.from[i].second.empty()) out += " AS " + q.from[i].second;
  }
  auto operand = [](const SqlOperand& op) -> std::string {
    if (!op.is_literal) return op.alias.empty() ? op.attr : op.alias + "." + op.attr;
    const Value& v = op.literal;
    if (v.is_null()) return "NULL";
    switch (*v.type()) {
      case AttrType::String: return "'" + v.as_str() + "'";
      case AttrType::Object: return "'" + v.as_object().text + "'";
      case AttrType::Date: return "'" + v.as_date().iso() + "'";
      case AttrType::Boolean: return v.as_bool() ? "TRUE" : "FALSE";
      default: return v.repr();
    }
  };
  if (!q.where.empty()) {
    out += " WHERE ";
    for (std::size_t i = 0; i < q.where.size(); ++i) {
      if (i) out += " AND ";
      out += operand(q.where[i].left);
      out += " ";
      out += to_string(q.where[i].op);
      out += " ";
      out += operand(q.where[i].right);
    }
  }
  return out;
}

}  // namespace rel2pg
