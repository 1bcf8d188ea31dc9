#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace unialg {

/// Elements of a finite algebra of size n are the integers 0..n-1.
using Element = std::uint32_t;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violation on user-supplied data (bad arities, out-of-range
/// elements, non-canonical partitions, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// A term refers to a variable that the assignment does not provide, or does
/// not match the signature it is evaluated in.
class MalformedTermError : public Error {
 public:
  using Error::Error;
};

/// A configured resource cap (element count, table size, enumeration bound)
/// would be exceeded.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

class SignatureMismatchError : public Error {
 public:
  using Error::Error;
};

/// Two objects that must live over the same algebra (or carrier) do not.
class MismatchedAlgebraError : public Error {
 public:
  using Error::Error;
};

/// A query asks for an arity beyond the bound a truncated object was built for.
class BoundExceededError : public Error {
 public:
  using Error::Error;
};

/// Raised when a partition fails the compatibility check. Carries the
/// offending operation and a pair of componentwise related argument tuples
/// whose images are not related.
class NotACongruenceError : public Error {
 public:
  NotACongruenceError(std::string message, std::size_t symbol,
                      std::vector<Element> lhs, std::vector<Element> rhs)
      : Error(std::move(message)),
        symbol_(symbol),
        lhs_(std::move(lhs)),
        rhs_(std::move(rhs)) {}

  std::size_t symbol() const { return symbol_; }
  const std::vector<Element>& lhs() const { return lhs_; }
  const std::vector<Element>& rhs() const { return rhs_; }

 private:
  std::size_t symbol_;
  std::vector<Element> lhs_;
  std::vector<Element> rhs_;
};

class NotInVarietyError : public Error {
 public:
  NotInVarietyError(std::string message, std::string algebra)
      : Error(std::move(message)), algebra_(std::move(algebra)) {}
  const std::string& algebra() const { return algebra_; }

 private:
  std::string algebra_;
};

/// Malformed input file. `byte_offset` is set for JSON syntax errors,
/// `json_path` (RFC 6901 pointer) for schema violations.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::string file, std::size_t byte_offset,
             std::string json_path)
      : Error(std::move(message)),
        file_(std::move(file)),
        byte_offset_(byte_offset),
        json_path_(std::move(json_path)) {}

  const std::string& file() const { return file_; }
  std::size_t byte_offset() const { return byte_offset_; }
  const std::string& json_path() const { return json_path_; }

 private:
  std::string file_;
  std::size_t byte_offset_;
  std::string json_path_;
};

/// Resource caps shared by every construction that can blow up.
struct Limits {
  /// Maximum number of elements of a constructed algebra (products, free
  /// algebras, generated subalgebras of products).
  std::size_t max_elements = 1'000'000;
  /// Maximum size of an algebra whose congruence lattice is enumerated.
  std::size_t enumeration_bound = 10;
  /// Maximum number of entries of a materialized operation table.
  std::size_t max_table_entries = 50'000'000;
};

}  // namespace unialg
