#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "rel2pg/errors.hpp"

namespace rel2pg {

/// The closed set of attribute types.
enum class AttrType { String, Date, Integer, Float, Boolean, Object };

inline const char* to_string(AttrType t) {
  switch (t) {
    case AttrType::String: return "String";
    case AttrType::Date: return "Date";
    case AttrType::Integer: return "Integer";
    case AttrType::Float: return "Float";
    case AttrType::Boolean: return "Boolean";
    case AttrType::Object: return "Object";
  }
  return "?";
}

inline std::optional<AttrType> attr_type_from_string(const std::string& s) {
  if (s == "String") return AttrType::String;
  if (s == "Date") return AttrType::Date;
  if (s == "Integer") return AttrType::Integer;
  if (s == "Float") return AttrType::Float;
  if (s == "Boolean") return AttrType::Boolean;
  if (s == "Object") return AttrType::Object;
  return std::nullopt;
}

/// A calendar date. Construction does not validate; see Date::valid().
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  friend auto operator<=>(const Date&, const Date&) = default;

  bool valid() const {
    if (month < 1 || month > 12 || day < 1) return false;
    static constexpr int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int limit = days[month - 1];
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    if (month == 2 && leap) limit = 29;
    return day <= limit;
  }

  std::string iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
  }
};

/// Parses "YYYY-MM-DD" or "DD/MM/YYYY". Rejects invalid calendar dates.
inline std::optional<Date> parse_date(const std::string& s) {
  Date d;
  char sep1 = 0, sep2 = 0, extra = 0;
  if (s.size() == 10 && s[4] == '-') {
    if (std::sscanf(s.c_str(), "%4d%c%2d%c%2d%c", &d.year, &sep1, &d.month, &sep2,
                    &d.day, &extra) != 5 ||
        sep1 != '-' || sep2 != '-')
      return std::nullopt;
  } else if (s.size() == 10 && s[2] == '/') {
    if (std::sscanf(s.c_str(), "%2d%c%2d%c%4d%c", &d.day, &sep1, &d.month, &sep2,
                    &d.year, &extra) != 5 ||
        sep1 != '/' || sep2 != '/')
      return std::nullopt;
  } else {
    return std::nullopt;
  }
  if (!d.valid()) return std::nullopt;
  return d;
}

/// Opaque text payload. Compared by exact equality only.
struct Object {
  std::string text;
  friend auto operator<=>(const Object&, const Object&) = default;
};

/// A data value: one of the six typed tags, or Null.
class Value {
 public:
  struct Null {
    friend auto operator<=>(const Null&, const Null&) = default;
  };

  Value() = default;

  static Value null() { return Value(); }
  static Value str(std::string s) { return Value(Storage(std::move(s))); }
  static Value integer(std::int64_t i) { return Value(Storage(i)); }
  static Value flt(double f) { return Value(Storage(f)); }
  static Value boolean(bool b) { return Value(Storage(b)); }
  static Value date(Date d) { return Value(Storage(d)); }
  static Value object(std::string s) { return Value(Storage(Object{std::move(s)})); }

  bool is_null() const { return std::holds_alternative<Null>(store_); }

  /// Type tag of a non-Null value; nullopt for Null (compatible with all types).
  std::optional<AttrType> type() const {
    if (is_null()) return std::nullopt;
    if (std::holds_alternative<std::string>(store_)) return AttrType::String;
    if (std::holds_alternative<std::int64_t>(store_)) return AttrType::Integer;
    if (std::holds_alternative<double>(store_)) return AttrType::Float;
    if (std::holds_alternative<bool>(store_)) return AttrType::Boolean;
    if (std::holds_alternative<Date>(store_)) return AttrType::Date;
    return AttrType::Object;
  }

  /// Null matches every declared type.
  bool matches(AttrType t) const { return is_null() || *type() == t; }

  const std::string& as_str() const { return std::get<std::string>(store_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(store_); }
  double as_flt() const { return std::get<double>(store_); }
  bool as_bool() const { return std::get<bool>(store_); }
  const Date& as_date() const { return std::get<Date>(store_); }
  const Object& as_object() const { return std::get<Object>(store_); }

  /// Exact equality, tag included. Null equals Null.
  friend bool operator==(const Value& a, const Value& b) = default;

  /// Display form, mainly for diagnostics.
  std::string repr() const {
    if (is_null()) return "NULL";
    switch (*type()) {
      case AttrType::String: return "\"" + as_str() + "\"";
      case AttrType::Integer: return std::to_string(as_int());
      case AttrType::Float: {
        std::ostringstream os;
        os << as_flt();
        return os.str();
      }
      case AttrType::Boolean: return as_bool() ? "true" : "false";
      case AttrType::Date: return as_date().iso();
      case AttrType::Object: return "obj(" + as_object().text + ")";
    }
    return "?";
  }

 private:
  using Storage = std::variant<Null, std::string, std::int64_t, double, bool, Date, Object>;
  explicit Value(Storage s) : store_(std::move(s)) {}
  Storage store_;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

inline const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "<>";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

namespace detail {

inline bool apply_order(CmpOp op, int cmp) {
  switch (op) {
    case CmpOp::Eq: return cmp == 0;
    case CmpOp::Ne: return cmp != 0;
    case CmpOp::Lt: return cmp < 0;
    case CmpOp::Le: return cmp <= 0;
    case CmpOp::Gt: return cmp > 0;
    case CmpOp::Ge: return cmp >= 0;
  }
  return false;
}

template <class T>
int three_way(const T& a, const T& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

}  // namespace detail

/// Predicate comparison. Any comparison involving Null is false.
/// Integer and Float compare numerically; a String that parses as a date
/// compares against a Date (query literals travel as text).
inline bool compare_values(CmpOp op, const Value& a, const Value& b) {
  if (a.is_null() || b.is_null()) return false;
  AttrType ta = *a.type(), tb = *b.type();
  if (ta == tb) {
    switch (ta) {
      case AttrType::String:
        return detail::apply_order(op, detail::three_way(a.as_str(), b.as_str()));
      case AttrType::Integer:
        return detail::apply_order(op, detail::three_way(a.as_int(), b.as_int()));
      case AttrType::Float:
        return detail::apply_order(op, detail::three_way(a.as_flt(), b.as_flt()));
      case AttrType::Boolean:
        return detail::apply_order(op, detail::three_way(a.as_bool(), b.as_bool()));
      case AttrType::Date:
        return detail::apply_order(op, detail::three_way(a.as_date(), b.as_date()));
      case AttrType::Object:
        return detail::apply_order(op,
                                   detail::three_way(a.as_object().text, b.as_object().text));
    }
    return false;
  }
  // Numeric cross-compare.
  auto numeric = [](const Value& v) -> std::optional<double> {
    if (v.type() == AttrType::Integer) return static_cast<double>(v.as_int());
    if (v.type() == AttrType::Float) return v.as_flt();
    return std::nullopt;
  };
  if (auto na = numeric(a), nb = numeric(b); na && nb)
    return detail::apply_order(op, detail::three_way(*na, *nb));
  // Date vs. textual date.
  auto as_date = [](const Value& v) -> std::optional<Date> {
    if (v.type() == AttrType::Date) return v.as_date();
    if (v.type() == AttrType::String) return parse_date(v.as_str());
    return std::nullopt;
  };
  if (auto da = as_date(a), db = as_date(b); da && db)
    return detail::apply_order(op, detail::three_way(*da, *db));
  return false;
}

}  // namespace rel2pg
