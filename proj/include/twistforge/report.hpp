#pragma once

// Run reports: certificate lists with an overall verdict, an input digest,
// timings, and the hints needed to re-verify without searching.

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "twistforge/certificate.hpp"

namespace twistforge {

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

struct RunReport {
  std::string command;
  json params = json::object();
  std::string input_digest;
  std::vector<Certificate> certificates;
  std::vector<std::string> notes;
  json timings = json::object();  // step -> milliseconds
  json hints = json::object();    // search results reused by recheck
  json outputs = json::object();

  /// FAIL if any certificate fails, else INCONCLUSIVE if any is, else PASS.
  /// A report holding only unverified claims is UNVERIFIED-PAPER-CLAIM.
  Status overall() const;
  /// 0 PASS, 1 FAIL, 3 INCONCLUSIVE; 2 is reserved for malformed input.
  int exit_code() const;
  void seal();  // fills input_digest from command and params
  json to_json() const;
  static RunReport from_json(const json& j);

  void add(Certificate c) { certificates.push_back(std::move(c)); }
  /// Runs fn, recording its time under `name`. ParseError and DomainError
  /// (rejected input) propagate; other errors become a FAIL certificate
  /// carrying the witness.
  void step(const std::string& name, const std::function<void()>& fn);
};

inline constexpr int kExitMalformed = 2;

}  // namespace twistforge
