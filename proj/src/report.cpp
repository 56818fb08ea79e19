#include "twistforge/report.hpp"

#include <cstdint>
#include <cstdio>

namespace twistforge {

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Status RunReport::overall() const {
  bool inconclusive = false, verified = false;
  for (const auto& c : certificates) {
    if (c.status == Status::fail) return Status::fail;
    if (c.status == Status::inconclusive) inconclusive = true;
    if (c.status != Status::unverified_paper_claim) verified = true;
  }
  if (inconclusive) return Status::inconclusive;
  if (!verified && !certificates.empty()) return Status::unverified_paper_claim;
  return Status::pass;
}

int RunReport::exit_code() const {
  switch (overall()) {
    case Status::fail: return 1;
    case Status::inconclusive: return 3;
    default: return 0;
  }
}

void RunReport::seal() { input_digest = fnv1a_hex(json{{"command", command}, {"params", params}}.dump()); }

json RunReport::to_json() const {
  json certs = json::array();
  std::size_t unverified = 0;
  for (const auto& c : certificates) {
    certs.push_back(c.to_json());
    if (c.status == Status::unverified_paper_claim) ++unverified;
  }
  return json{{"command", command},
              {"params", params},
              {"input_digest", input_digest},
              {"overall", to_string(overall())},
              {"unverified_claims", unverified},
              {"certificates", certs},
              {"notes", notes},
              {"timings_ms", timings},
              {"hints", hints},
              {"outputs", outputs}};
}

RunReport RunReport::from_json(const json& j) {
  if (!j.is_object()) throw ParseError("report must be an object");
  if (!j.contains("command") || !j["command"].is_string()) throw ParseError("report needs a 'command'", "/command");
  if (!j.contains("certificates") || !j["certificates"].is_array())
    throw ParseError("report needs 'certificates'", "/certificates");
  RunReport r;
  r.command = j["command"];
  if (j.contains("params")) r.params = j["params"];
  if (j.contains("input_digest") && j["input_digest"].is_string()) r.input_digest = j["input_digest"];
  for (std::size_t i = 0; i < j["certificates"].size(); ++i)
    r.certificates.push_back(Certificate::from_json(j["certificates"][i], "/certificates/" + std::to_string(i)));
  if (j.contains("notes") && j["notes"].is_array())
    for (const auto& n : j["notes"])
      if (n.is_string()) r.notes.push_back(n);
  if (j.contains("hints") && j["hints"].is_object()) r.hints = j["hints"];
  if (j.contains("outputs") && j["outputs"].is_object()) r.outputs = j["outputs"];
  if (j.contains("timings_ms") && j["timings_ms"].is_object()) r.timings = j["timings_ms"];
  return r;
}

void RunReport::step(const std::string& name, const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    fn();
  } catch (const ParseError&) {
    throw;
  } catch (const DomainError&) {
    throw;
  } catch (const SearchExhausted& e) {
    add(Certificate{name, e.what(), Status::fail, e.witness(), "SEARCH-EXHAUSTED"});
  } catch (const Error& e) {
    add(Certificate{name, e.what(), Status::fail, e.witness(), "step raised an error"});
  }
  const auto t1 = std::chrono::steady_clock::now();
  timings[name] = std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace twistforge
