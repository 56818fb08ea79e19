#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "twistforge/pipelines.hpp"

using namespace twistforge;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// --b accepts a rational ("3/4") or a JSON coordinate list ("[0,1]").
json parse_b(const std::string& text) {
  if (!text.empty() && text.front() == '[') {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("--b: ") + e.what(), "/flags/b");
    }
  }
  return text;
}

void emit(const json& doc, bool pretty, const std::string& out) {
  const std::string text = pretty ? doc.dump(2) : doc.dump();
  if (out.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream f(out);
    if (!f) throw ParseError("cannot write '" + out + "'");
    f << text << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twistforge: descent data, twists and smoothness certificates for hypersurfaces"};
  app.require_subcommand(1);

  std::optional<int> m, n, p, d;
  std::string a, b, out, recheck_path, field_kind;
  std::optional<bool> rational_point;
  std::uint64_t seed = 20240601;
  bool pretty = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out, "write the report here instead of stdout");
    sub->add_flag("--pretty", pretty, "indent the JSON output");
    sub->add_option("--seed", seed, "seed recorded in the report for randomized inputs");
    sub->add_option("--recheck", recheck_path, "re-verify a saved report from its witnesses");
  };

  std::string which;
  auto* verify = app.add_subcommand("verify-paper-example", "run a worked example end to end");
  verify->add_option("which", which, "p2, p3, p4 or family")->check(CLI::IsMember({"p2", "p3", "p4", "family"}));
  verify->add_option("--m", m, "example parameter m (family: Kummer radicand)");
  verify->add_option("--n", n, "family: projective dimension");
  verify->add_option("--p", p, "family: odd prime p");
  verify->add_option("--a", a, "family: coefficient a");
  common(verify);

  std::string check;
  std::vector<std::string> files;
  auto* chk = app.add_subcommand("check", "run one verification on JSON input");
  chk->add_option("kind", check, "smooth, cocycle, covariance, twist, reduce, norm-obstruction or conditions")
      ->check(CLI::IsMember({"smooth", "cocycle", "covariance", "twist", "reduce", "norm-obstruction", "conditions"}));
  chk->add_option("files", files, "input documents");
  chk->add_option("--b", b, "Kummer representative or rational beta");
  chk->add_option("--d", d, "conditions: degree");
  chk->add_option("--n", n, "conditions: projective dimension");
  chk->add_option("--field-kind", field_kind, "conditions: declared field kind");
  chk->add_option("--rational-point", rational_point, "conditions: caller evidence of a rational point");
  common(chk);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitMalformed;
  }

  try {
    RunReport R;
    if (!recheck_path.empty()) {
      R = twistforge::recheck(read_json_file(recheck_path));
    } else if (verify->parsed()) {
      if (which.empty()) throw ParseError("verify-paper-example needs p2, p3, p4 or family");
      json params = json::object();
      if (which == "family") {
        if (n) params["n"] = *n;
        if (p) params["p"] = *p;
        if (!a.empty()) params["a"] = a;
        if (m) params["m"] = *m;
      } else if (m) {
        params["m"] = *m;
      }
      R = verify_paper_example(which, params);
    } else {
      if (check.empty()) throw ParseError("check needs a kind");
      std::vector<json> docs;
      for (const auto& f : files) docs.push_back(read_json_file(f));
      json flags{{"seed", seed}};
      if (!b.empty()) flags["b"] = parse_b(b);
      if (d) flags["d"] = *d;
      if (n) flags["n"] = *n;
      if (!field_kind.empty()) flags["field_kind"] = field_kind;
      if (rational_point) flags["rational_point"] = *rational_point;
      R = run_check(check, docs, flags);
    }
    emit(R.to_json(), pretty, out);
    return R.exit_code();
  } catch (const ParseError& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    emit(json{{"error", e.what()}, {"pointer", e.pointer()}}, pretty, "");
    return kExitMalformed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    emit(json{{"error", e.what()}, {"witness", e.witness()}}, pretty, "");
    return kExitMalformed;
  }
}
