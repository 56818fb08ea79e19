#pragma once

// Generic verification records shared by the descent, twist and report layers.

#include <string>

#include "twistforge/errors.hpp"

namespace twistforge {

enum class Status { pass, fail, inconclusive, unverified_paper_claim };

std::string to_string(Status s);
Status status_from_string(const std::string& s);

struct Certificate {
  std::string kind;   // machine tag used by recheck
  std::string claim;  // human summary
  Status status = Status::pass;
  json witness = json::object();
  std::string note;

  bool passed() const { return status == Status::pass; }
  json to_json() const;
  static Certificate from_json(const json& j, const std::string& pointer = "");
};

inline Status pass_if(bool ok) { return ok ? Status::pass : Status::fail; }

}  // namespace twistforge
