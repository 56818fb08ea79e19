#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

namespace twistforge {

using json = nlohmann::json;

/// Base error for every failed precondition or refused computation. Carries
/// a JSON witness (the factor, gcd, root, or field that caused the refusal).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, json witness = nullptr)
      : std::runtime_error(what), witness_(std::move(witness)) {}
  const json& witness() const noexcept { return witness_; }

 private:
  json witness_;
};

/// Operands live in different fields / rings.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual or JSON input. `pointer` is a JSON pointer to the
/// offending field when the input was a document.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::string pointer = "")
      : Error(what, json{{"pointer", pointer}}), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

/// A bounded search ran out without producing a certificate.
class SearchExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace twistforge
