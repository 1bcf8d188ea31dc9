#include "unialg/io.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>
#include <vector>

#include "detail/json_util.hpp"

namespace unialg {

namespace {

using detail::Json;

constexpr std::size_t kNoOffset = std::numeric_limits<std::size_t>::max();

// Byte offset of the value a JSON pointer names, found by walking text that
// has already parsed cleanly. Keys are compared after decoding the common
// escapes; a pointer that names nothing yields kNoOffset.
class PointerLocator {
 public:
  PointerLocator(std::string_view text, const std::string& pointer) : text_(text) {
    std::size_t start = 1;
    while (start <= pointer.size() && pointer.size() > 1) {
      const std::size_t end = std::min(pointer.find('/', start), pointer.size());
      std::string token = pointer.substr(start, end - start);
      for (std::size_t at; (at = token.find("~1")) != std::string::npos;) {
        token.replace(at, 2, "/");
      }
      for (std::size_t at; (at = token.find("~0")) != std::string::npos;) {
        token.replace(at, 2, "~");
      }
      tokens_.push_back(std::move(token));
      start = end + 1;
    }
  }

  std::size_t find() {
    if (text_.empty()) {
      return kNoOffset;
    }
    skip_space();
    return value(0) ? found_ : kNoOffset;
  }

 private:
  // Returns true once the target has been located.
  bool value(std::size_t depth) {
    skip_space();
    if (depth == tokens_.size()) {
      found_ = pos_;
      return true;
    }
    if (pos_ >= text_.size()) {
      return false;
    }
    if (text_[pos_] == '{') {
      ++pos_;
      while (true) {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] == '}') {
          ++pos_;
          return false;
        }
        const std::string key = string();
        skip_space();
        ++pos_;  // ':'
        if (key == tokens_[depth]) {
          return value(depth + 1);
        }
        skip_value();
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
        }
      }
    }
    if (text_[pos_] == '[') {
      ++pos_;
      for (std::size_t index = 0;; ++index) {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] == ']') {
          ++pos_;
          return false;
        }
        if (std::to_string(index) == tokens_[depth]) {
          return value(depth + 1);
        }
        skip_value();
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
        }
      }
    }
    return false;
  }

  void skip_value() {
    skip_space();
    if (pos_ >= text_.size()) {
      return;
    }
    const char c = text_[pos_];
    if (c == '"') {
      string();
    } else if (c == '{' || c == '[') {
      const char close = c == '{' ? '}' : ']';
      ++pos_;
      skip_space();
      while (pos_ < text_.size() && text_[pos_] != close) {
        if (c == '{') {
          string();
          skip_space();
          ++pos_;
        }
        skip_value();
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          skip_space();
        }
      }
      ++pos_;
    } else {
      while (pos_ < text_.size() && std::string_view(",]} \t\r\n").find(text_[pos_]) ==
                                        std::string_view::npos) {
        ++pos_;
      }
    }
  }

  std::string string() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
        const char e = text_[++pos_];
        out += e == 'n' ? '\n' : e == 't' ? '\t' : e;
      } else {
        out += text_[pos_];
      }
      ++pos_;
    }
    ++pos_;
    return out;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::string_view(" \t\r\n").find(text_[pos_]) !=
                                      std::string_view::npos) {
      ++pos_;
    }
  }

  std::string_view text_;
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
  std::size_t found_ = kNoOffset;
};

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  Json parse(std::string_view text) {
    text_ = text;
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      // nlohmann reports the 1-based position of the offending byte.
      const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
      throw ParseError(source_ + ": invalid JSON at byte " + std::to_string(offset), source_,
                       offset, "");
    }
  }

  [[noreturn]] void fail(const std::string& pointer, const std::string& reason) const {
    const std::size_t offset = PointerLocator(text_, pointer).find();
    std::string where = pointer.empty() ? "/" : pointer;
    if (offset != kNoOffset) {
      where += " (byte " + std::to_string(offset) + ")";
    }
    throw ParseError(source_ + ": " + where + ": " + reason, source_, offset,
                     pointer.empty() ? "/" : pointer);
  }

  const Json& field(const Json& object, const std::string& pointer, const char* key) const {
    auto it = object.find(key);
    if (it == object.end()) {
      fail(pointer, std::string("missing field '") + key + "'");
    }
    return *it;
  }

  void only_keys(const Json& object, const std::string& pointer,
                 std::initializer_list<const char*> keys) const {
    for (auto it = object.begin(); it != object.end(); ++it) {
      if (std::find_if(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }) ==
          keys.end()) {
        fail(pointer + "/" + it.key(), "unknown field");
      }
    }
  }

  std::size_t natural(const Json& j, const std::string& pointer) const {
    if (!j.is_number_unsigned()) {
      fail(pointer, "expected a non-negative integer");
    }
    return j.get<std::size_t>();
  }

  std::string text(const Json& j, const std::string& pointer) const {
    if (!j.is_string()) {
      fail(pointer, "expected a string");
    }
    return j.get<std::string>();
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::string_view text_;
};

FiniteAlgebra algebra_from(const Json& root, const Reader& r) {
  if (!root.is_object()) {
    r.fail("", "expected an object");
  }
  r.only_keys(root, "", {"name", "size", "operations"});
  const std::string name = r.text(r.field(root, "", "name"), "/name");
  const std::size_t size = r.natural(r.field(root, "", "size"), "/size");
  if (size == 0) {
    r.fail("/size", "size must be at least 1");
  }
  const Json& ops = r.field(root, "", "operations");
  if (!ops.is_array()) {
    r.fail("/operations", "expected an array");
  }
  std::vector<OperationSymbol> symbols;
  std::vector<std::vector<Element>> tables;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::string at = "/operations/" + std::to_string(i);
    const Json& op = ops[i];
    if (!op.is_object()) {
      r.fail(at, "expected an object");
    }
    r.only_keys(op, at, {"symbol", "arity", "table"});
    const std::string symbol = r.text(r.field(op, at, "symbol"), at + "/symbol");
    if (symbol.empty()) {
      r.fail(at + "/symbol", "symbol must be nonempty");
    }
    for (const auto& s : symbols) {
      if (s.name == symbol) {
        r.fail(at + "/symbol", "duplicate symbol '" + symbol + "'");
      }
    }
    const std::size_t arity = r.natural(r.field(op, at, "arity"), at + "/arity");
    if (arity == 0) {
      r.fail(at + "/arity", "arity must be at least 1");
    }
    const Json& table = r.field(op, at, "table");
    if (!table.is_array()) {
      r.fail(at + "/table", "expected an array");
    }
    const auto expected = checked_power(size, arity, Limits{}.max_table_entries);
    if (!expected) {
      r.fail(at + "/table", "table too large");
    }
    if (table.size() != *expected) {
      r.fail(at + "/table", "table has " + std::to_string(table.size()) + " entries, expected " +
                                std::to_string(*expected));
    }
    std::vector<Element> values(table.size());
    for (std::size_t j = 0; j < table.size(); ++j) {
      const std::string entry = at + "/table/" + std::to_string(j);
      const std::size_t v = r.natural(table[j], entry);
      if (v >= size) {
        r.fail(entry, "entry " + std::to_string(v) + " is out of range for size " +
                          std::to_string(size));
      }
      values[j] = static_cast<Element>(v);
    }
    symbols.push_back({symbol, arity});
    tables.push_back(std::move(values));
  }
  return FiniteAlgebra(name, Signature(std::move(symbols)), size, std::move(tables));
}

}  // namespace

namespace detail {

Json term_json(const Term& term, const Signature& signature) {
  if (term.is_variable()) {
    return Json::array({"x", term.variable_index()});
  }
  Json out = Json::array({signature[term.symbol()].name});
  for (const auto& c : term.children()) {
    out.push_back(term_json(c, signature));
  }
  return out;
}

Term term_from(const Json& j, const Signature& signature, const std::string& pointer) {
  const Reader r("<term>");
  if (!j.is_array() || j.empty() || !j[0].is_string()) {
    r.fail(pointer, "expected [symbol, ...] or [\"x\", index]");
  }
  const std::string head = j[0].get<std::string>();
  if (head == "x" && !signature.find("x")) {
    if (j.size() != 2) {
      r.fail(pointer, "a variable is [\"x\", index]");
    }
    const std::size_t index = r.natural(j[1], pointer + "/1");
    if (index == 0) {
      r.fail(pointer + "/1", "variable indices start at 1");
    }
    return Term::variable(index);
  }
  const auto symbol = signature.find(head);
  if (!symbol) {
    r.fail(pointer + "/0", "unknown symbol '" + head + "'");
  }
  if (j.size() != signature[*symbol].arity + 1) {
    r.fail(pointer, "'" + head + "' takes " + std::to_string(signature[*symbol].arity) +
                        " arguments");
  }
  std::vector<Term> children;
  for (std::size_t i = 1; i < j.size(); ++i) {
    children.push_back(term_from(j[i], signature, pointer + "/" + std::to_string(i)));
  }
  return Term::apply(*symbol, std::move(children));
}

Json partition_json(const Partition& partition) { return Json(partition.labels()); }

Json algebra_json(const FiniteAlgebra& algebra) {
  Json ops = Json::array();
  for (std::size_t s = 0; s < algebra.signature().size(); ++s) {
    const auto table = algebra.table(s);
    ops.push_back(Json{{"symbol", algebra.signature()[s].name},
                       {"arity", algebra.signature()[s].arity},
                       {"table", std::vector<Element>(table.begin(), table.end())}});
  }
  return Json{{"name", algebra.name()}, {"size", algebra.size()}, {"operations", ops}};
}

}  // namespace detail

FiniteAlgebra parse_algebra(std::string_view text, const std::string& source) {
  Reader r(source);
  const Json root = r.parse(text);
  try {
    return algebra_from(root, r);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    r.fail("", e.what());
  }
}

FiniteAlgebra parse_algebra_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(path + ": cannot open file", path, kNoOffset, "");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_algebra(buffer.str(), path);
}

std::string serialize_algebra(const FiniteAlgebra& algebra) {
  std::string out = "{\n";
  out += "  \"name\": " + Json(algebra.name()).dump() + ",\n";
  out += "  \"size\": " + std::to_string(algebra.size()) + ",\n";
  out += "  \"operations\": [";
  const auto& signature = algebra.signature();
  for (std::size_t s = 0; s < signature.size(); ++s) {
    out += s ? ",\n" : "\n";
    out += "    {\n";
    out += "      \"symbol\": " + Json(signature[s].name).dump() + ",\n";
    out += "      \"arity\": " + std::to_string(signature[s].arity) + ",\n";
    out += "      \"table\": [";
    const auto table = algebra.table(s);
    for (std::size_t i = 0; i < table.size(); ++i) {
      out += (i ? ", " : "") + std::to_string(table[i]);
    }
    out += "]\n    }";
  }
  out += signature.empty() ? "]\n" : "\n  ]\n";
  return out + "}\n";
}

std::string term_to_json(const Term& term, const Signature& signature) {
  return detail::term_json(term, signature).dump();
}

Term term_from_json(std::string_view text, const Signature& signature) {
  Reader r("<term>");
  return detail::term_from(r.parse(text), signature, "");
}

std::string partition_to_json(const Partition& partition) {
  return detail::partition_json(partition).dump();
}

Partition partition_from_json(std::string_view text) {
  Reader r("<partition>");
  const Json j = r.parse(text);
  if (!j.is_array()) {
    r.fail("", "expected an array of class labels");
  }
  std::vector<std::uint32_t> labels;
  for (std::size_t i = 0; i < j.size(); ++i) {
    labels.push_back(static_cast<std::uint32_t>(r.natural(j[i], "/" + std::to_string(i))));
  }
  try {
    return Partition::from_canonical(std::move(labels));
  } catch (const InvalidInputError& e) {
    r.fail("", e.what());
  }
}

}  // namespace unialg
