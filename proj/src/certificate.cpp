#include "twistforge/certificate.hpp"

namespace twistforge {

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::inconclusive: return "INCONCLUSIVE";
    case Status::unverified_paper_claim: return "UNVERIFIED-PAPER-CLAIM";
  }
  return "FAIL";
}

Status status_from_string(const std::string& s) {
  if (s == "PASS") return Status::pass;
  if (s == "FAIL") return Status::fail;
  if (s == "INCONCLUSIVE") return Status::inconclusive;
  if (s == "UNVERIFIED-PAPER-CLAIM") return Status::unverified_paper_claim;
  throw ParseError("unknown status '" + s + "'");
}

json Certificate::to_json() const {
  json j{{"kind", kind}, {"claim", claim}, {"status", to_string(status)}, {"witness", witness}};
  if (!note.empty()) j["note"] = note;
  return j;
}

Certificate Certificate::from_json(const json& j, const std::string& pointer) {
  if (!j.is_object()) throw ParseError("certificate must be an object", pointer);
  for (const char* key : {"kind", "claim", "status"})
    if (!j.contains(key) || !j[key].is_string()) throw ParseError(std::string("certificate needs string '") + key + "'", pointer + "/" + key);
  Certificate c;
  c.kind = j["kind"];
  c.claim = j["claim"];
  try {
    c.status = status_from_string(j["status"]);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), pointer + "/status");
  }
  if (j.contains("witness")) c.witness = j["witness"];
  if (j.contains("note") && j["note"].is_string()) c.note = j["note"];
  return c;
}

}  // namespace twistforge
