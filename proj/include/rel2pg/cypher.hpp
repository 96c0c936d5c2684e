#pragma once

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "rel2pg/errors.hpp"
#include "rel2pg/value.hpp"

namespace rel2pg {

/// Direction of a relationship as written left-to-right in a pattern:
/// Out is -[:L]->, In is <-[:L]-.
enum class RelDir { Out, In };

struct CyNode {
  std::string var;
  std::string label;

  friend bool operator==(const CyNode&, const CyNode&) = default;
};

struct CyRel {
  RelDir dir = RelDir::Out;
  std::string label;

  friend bool operator==(const CyRel&, const CyRel&) = default;
};

/// A linear path pattern: head node followed by (relationship, node) hops.
struct CyPath {
  CyNode head;
  std::vector<std::pair<CyRel, CyNode>> hops;

  friend bool operator==(const CyPath&, const CyPath&) = default;
};

struct CyOperand {
  bool is_literal = false;
  std::string var;
  std::string prop;
  Value literal;

  friend bool operator==(const CyOperand&, const CyOperand&) = default;

  static CyOperand property(std::string var_, std::string prop_) {
    return {false, std::move(var_), std::move(prop_), Value::null()};
  }
  static CyOperand lit(Value v) { return {true, "", "", std::move(v)}; }
};

struct CyCondition {
  CyOperand left;
  CmpOp op = CmpOp::Eq;
  CyOperand right;

  friend bool operator==(const CyCondition&, const CyCondition&) = default;
};

struct CyReturnItem {
  std::string var;
  std::string prop;
  bool star = false;  // var.* — not produced by the translator, kept for completeness

  friend bool operator==(const CyReturnItem&, const CyReturnItem&) = default;
};

struct CypherQuery {
  std::vector<CyPath> match_patterns;
  std::vector<CyCondition> where;
  std::vector<CyReturnItem> return_items;
  bool distinct = false;

  friend bool operator==(const CypherQuery&, const CypherQuery&) = default;
};

namespace cypher_detail {

inline bool plain_label(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

inline std::string quote_label(const std::string& s) {
  return plain_label(s) ? s : "`" + s + "`";
}

inline std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string literal_text(const Value& v) {
  if (v.is_null()) return "null";
  switch (*v.type()) {
    case AttrType::String: return quote_string(v.as_str());
    case AttrType::Object: return quote_string(v.as_object().text);
    case AttrType::Date: return quote_string(v.as_date().iso());
    case AttrType::Integer: return std::to_string(v.as_int());
    case AttrType::Boolean: return v.as_bool() ? "true" : "false";
    case AttrType::Float: {
      std::string s = std::to_string(v.as_flt());
      return s;
    }
  }
  return "null";
}

}  // namespace cypher_detail

/// Deterministic textual form: MATCH / WHERE / RETURN, one clause per line,
/// backtick-quoting labels that are not plain identifiers.
inline std::string render_cypher(const CypherQuery& q) {
  using cypher_detail::quote_label;
  std::string out = "MATCH ";
  for (std::size_t i = 0; i < q.match_patterns.size(); ++i) {
    if (i) out += ", ";
    const CyPath& p = q.match_patterns[i];
    out += "(" + p.head.var + ":" + quote_label(p.head.label) + ")";
    for (const auto& [rel, node] : p.hops) {
      if (rel.dir == RelDir::Out)
        out += "-[:" + quote_label(rel.label) + "]->";
      else
        out += "<-[:" + quote_label(rel.label) + "]-";
      out += "(" + node.var + ":" + quote_label(node.label) + ")";
    }
  }
  auto operand = [](const CyOperand& op) {
    return op.is_literal ? cypher_detail::literal_text(op.literal) : op.var + "." + op.prop;
  };
  if (!q.where.empty()) {
    out += "\nWHERE ";
    for (std::size_t i = 0; i < q.where.size(); ++i) {
      if (i) out += " AND ";
      out += operand(q.where[i].left);
      out += " ";
      out += to_string(q.where[i].op);
      out += " ";
      out += operand(q.where[i].right);
    }
  }
  out += "\nRETURN ";
  if (q.distinct) out += "DISTINCT ";
  for (std::size_t i = 0; i < q.return_items.size(); ++i) {
    if (i) out += ", ";
    if (q.return_items[i].star)
      out += q.return_items[i].var + ".*";
    else
      out += q.return_items[i].var + "." + q.return_items[i].prop;
  }
  out += "\n";
  return out;
}

namespace cypher_detail {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) { advance(); }

  CypherQuery parse() {
    expect_keyword("MATCH");
    CypherQuery q;
    q.match_patterns.push_back(parse_path());
    while (accept_punct(",")) q.match_patterns.push_back(parse_path());
    if (is_keyword("WHERE")) {
      advance();
      q.where.push_back(parse_condition());
      while (is_keyword("AND")) {
        advance();
        q.where.push_back(parse_condition());
      }
    }
    expect_keyword("RETURN");
    if (is_keyword("DISTINCT")) {
      advance();
      q.distinct = true;
    }
    q.return_items.push_back(parse_return_item());
    while (accept_punct(",")) q.return_items.push_back(parse_return_item());
    if (!tok_.empty() && tok_ != ";")
      throw ParseError("unexpected token '" + tok_ + "'", line_, col_);
    return q;
  }

 private:
  CyPath parse_path() {
    CyPath p;
    p.head = parse_node();
    for (;;) {
      CyRel rel;
      if (accept_punct("-")) {
        expect_punct("[");
        expect_punct(":");
        rel.label = parse_label();
        expect_punct("]");
        expect_punct("-");
        expect_punct(">");
        rel.dir = RelDir::Out;
      } else if (accept_punct("<")) {
        expect_punct("-");
        expect_punct("[");
        expect_punct(":");
        rel.label = parse_label();
        expect_punct("]");
        expect_punct("-");
        rel.dir = RelDir::In;
      } else {
        break;
      }
      p.hops.emplace_back(rel, parse_node());
    }
    return p;
  }

  CyNode parse_node() {
    expect_punct("(");
    CyNode n;
    n.var = expect_ident("node variable");
    expect_punct(":");
    n.label = parse_label();
    expect_punct(")");
    return n;
  }

  std::string parse_label() {
    if (kind_ == Backtick) {
      std::string s = tok_;
      advance();
      return s;
    }
    return expect_ident("label");
  }

  CyCondition parse_condition() {
    CyCondition c;
    c.left = parse_operand();
    c.op = parse_op();
    c.right = parse_operand();
    if (c.left.is_literal && !c.right.is_literal) {
      std::swap(c.left, c.right);
      c.op = flip(c.op);
    }
    return c;
  }

  CyOperand parse_operand() {
    if (kind_ == Number) {
      std::string t = tok_;
      advance();
      if (t.find('.') != std::string::npos || t.find('e') != std::string::npos ||
          t.find('E') != std::string::npos)
        return CyOperand::lit(Value::flt(std::stod(t)));
      return CyOperand::lit(Value::integer(std::stoll(t)));
    }
    if (kind_ == Str) {
      std::string t = tok_;
      advance();
      return CyOperand::lit(Value::str(t));
    }
    if (is_keyword("TRUE") || is_keyword("FALSE")) {
      bool b = is_keyword("TRUE");
      advance();
      return CyOperand::lit(Value::boolean(b));
    }
    if (is_keyword("NULL")) {
      advance();
      return CyOperand::lit(Value::null());
    }
    std::string var = expect_ident("property reference");
    expect_punct(".");
    return CyOperand::property(var, expect_ident("property name"));
  }

  CmpOp parse_op() {
    if (kind_ != Punct) throw ParseError("expected comparison operator", line_, col_);
    std::string p = tok_;
    advance();
    if (p == "=") return CmpOp::Eq;
    if (p == "<" && tok_ == ">" && kind_ == Punct && adjacent_) {
      advance();
      return CmpOp::Ne;
    }
    if (p == "<" && tok_ == "=" && kind_ == Punct && adjacent_) {
      advance();
      return CmpOp::Le;
    }
    if (p == ">" && tok_ == "=" && kind_ == Punct && adjacent_) {
      advance();
      return CmpOp::Ge;
    }
    if (p == "<") return CmpOp::Lt;
    if (p == ">") return CmpOp::Gt;
    throw ParseError("unknown operator '" + p + "'", line_, col_);
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

  CyReturnItem parse_return_item() {
    CyReturnItem item;
    item.var = expect_ident("return item");
    expect_punct(".");
    if (accept_punct("*")) {
      item.star = true;
      return item;
    }
    item.prop = expect_ident("property name");
    return item;
  }

  enum Kind { End, Ident, Number, Str, Punct, Backtick };

  void advance() {
    adjacent_ = pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]));
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) take();
    tok_.clear();
    line_ = cur_line_;
    col_ = cur_col_;
    if (pos_ >= text_.size()) {
      kind_ = End;
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      kind_ = Ident;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        tok_ += take();
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) && numeric_ok_)) {
      kind_ = Number;
      if (c == '-') tok_ += take();
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
              text_[pos_] == 'e' || text_[pos_] == 'E'))
        tok_ += take();
      return;
    }
    if (c == '"' || c == '\'') {
      char quote = take();
      kind_ = Str;
      while (pos_ < text_.size() && text_[pos_] != quote) {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) take();
        tok_ += take();
      }
      if (pos_ >= text_.size()) throw ParseError("unterminated string", line_, col_);
      take();
      return;
    }
    if (c == '`') {
      take();
      kind_ = Backtick;
      while (pos_ < text_.size() && text_[pos_] != '`') tok_ += take();
      if (pos_ >= text_.size()) throw ParseError("unterminated backtick label", line_, col_);
      take();
      return;
    }
    kind_ = Punct;
    tok_ += take();
  }

  char take() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++cur_line_;
      cur_col_ = 1;
    } else {
      ++cur_col_;
    }
    return c;
  }

  bool is_keyword(const std::string& kw) const {
    if (kind_ != Ident) return false;
    if (tok_.size() != kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i)
      if (std::toupper(static_cast<unsigned char>(tok_[i])) != kw[i]) return false;
    return true;
  }
  void expect_keyword(const std::string& kw) {
    if (!is_keyword(kw)) throw ParseError("expected " + kw, line_, col_);
    advance();
  }
  bool accept_punct(const std::string& p) {
    if (kind_ == Punct && tok_ == p) {
      advance();
      return true;
    }
    return false;
  }
  void expect_punct(const std::string& p) {
    if (kind_ != Punct || tok_ != p)
      throw ParseError("expected '" + p + "'", line_, col_);
    advance();
  }
  std::string expect_ident(const std::string& what) {
    if (kind_ != Ident) throw ParseError("expected " + what, line_, col_);
    std::string s = tok_;
    advance();
    return s;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int cur_line_ = 1, cur_col_ = 1;
  int line_ = 1, col_ = 1;
  std::string tok_;
  Kind kind_ = End;
  bool adjacent_ = false;
  bool numeric_ok_ = true;
};

}  // namespace cypher_detail

/// Parses the MATCH-WHERE-RETURN subset emitted by the translator.
inline CypherQuery parse_cypher(const std::string& text) {
  return cypher_detail::Parser(text).parse();
}

}  // namespace rel2pg
