// spinform: command-line front end.
//
//   spinform verify <check...|all> [--field q|fp:p] [--seed n] [--trials n] [--out path]
//   spinform form diagonalize|witt <form.json>
//   spinform form isometric <a.json> <b.json>
//   spinform cocycle check <transition.json>
//   spinform cocycle push --rep spin3|spin4_diag|spin6_hyp3 <transition.json>
//   spinform cocycle twist <transition.json> <units.json>
//   spinform cocycle witness <transition.json> <witness.json>
//
// Exit codes: 0 all PASS, 1 a check failed, 2 bad arguments or input, 3 wrong field.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spinform/spinform.hpp"

namespace {

using spinform::json;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitWrongField = 3;

struct Options {
  std::string field = "q";
  std::uint64_t seed = 0;
  std::size_t trials = 500;
  std::string out;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw spinform::ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw spinform::ParseError(path + ": " + e.what());
  }
}

void emit(const json& j, const Options& opt) {
  const std::string text = j.dump(2) + "\n";
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out, std::ios::binary);
  if (!out) throw spinform::ParseError("cannot write '" + opt.out + "'");
  out << text;
}

int status_code(bool passed) { return passed ? kExitOk : kExitFail; }

int cmd_verify(const std::vector<std::string>& names, const Options& opt) {
  spinform::VerifyPlan plan;
  plan.field = spinform::FieldDescriptor::parse(opt.field);
  plan.seed = opt.seed;
  plan.samples = opt.trials;
  const auto certs = spinform::run_checks(names, plan);
  for (const auto& c : certs) std::cerr << c.check() << ": " << (c.passed() ? "PASS" : "FAIL") << "\n";
  const json m = spinform::manifest(certs);
  emit(m, opt);
  return status_code(m.at("status") == "PASS");
}

template <class F>
json square_classes(const std::vector<F>& diag) {
  std::size_t first = 0;
  std::size_t second = 0;
  for (const auto& d : diag) {
    if constexpr (std::is_same_v<F, spinform::Rational>) {
      (d.sign() > 0 ? first : second) += 1;
    } else {
      (spinform::is_square(d) ? first : second) += 1;
    }
  }
  if constexpr (std::is_same_v<F, spinform::Rational>) return json{{"positive", first}, {"negative", second}};
  return json{{"squares", first}, {"nonsquares", second}};
}

int cmd_form(const std::string& action, const std::vector<std::string>& files, const Options& opt) {
  const std::size_t want = action == "isometric" ? 2 : 1;
  if (files.size() != want) {
    throw spinform::ParseError("form " + action + " takes " + std::to_string(want) + " file(s)");
  }
  const json first = read_json(files[0]);
  const auto field = spinform::form_field(first, spinform::FieldDescriptor::parse(opt.field));
  const json result = spinform::with_field(field, [&]<class F>(std::type_identity<F>) -> json {
    const auto f = spinform::form_from_json<F>(first, field);
    json out{{"schema", spinform::kSchemaVersion}, {"action", action}, {"field", field.to_string()}};
    if (action == "diagonalize") {
      const auto d = spinform::diagonalize(f);
      out["change_of_basis"] = spinform::to_json(d.change_of_basis);
      out["diagonal"] = spinform::to_json(d.diagonal);
      out["square_classes"] = square_classes(d.diagonal);
    } else if (action == "witt") {
      const auto w = spinform::witt_decompose(f);
      out.update(spinform::to_json(w));
    } else {
      const auto g = spinform::form_from_json<F>(read_json(files[1]), field);
      out["isometric"] = spinform::is_isometric_ff(f, g);
      out["ranks"] = {f.rank(), g.rank()};
      out["discriminants"] = {spinform::to_json(spinform::discriminant(f)), spinform::to_json(spinform::discriminant(g))};
    }
    return out;
  });
  emit(result, opt);
  return kExitOk;
}

spinform::EvaluationPlan evaluation_plan(const Options& opt) {
  spinform::EvaluationPlan plan;
  const auto field = spinform::FieldDescriptor::parse(opt.field);
  if (field.is_finite()) plan.prime = field.modulus();
  plan.trials = opt.trials;
  plan.seed = opt.seed;
  return plan;
}

int cmd_cocycle(const std::string& action, const std::vector<std::string>& files, const std::string& rep,
                const Options& opt) {
  const std::size_t want = action == "check" || action == "push" ? 1 : 2;
  if (files.size() != want) {
    throw spinform::ParseError("cocycle " + action + " takes " + std::to_string(want) + " file(s)");
  }
  const auto plan = evaluation_plan(opt);
  const auto data = spinform::transition_from_json(read_json(files[0]));
  json out{{"schema", spinform::kSchemaVersion}, {"action", action}};
  bool passed = true;
  if (action == "check") {
    auto cert = spinform::check_cocycle(data, plan);
    cert.absorb(spinform::structure_check(data, plan), "structure");
    passed = cert.passed();
    out["certificate"] = cert.to_json();
  } else if (action == "push") {
    if (rep.empty()) throw spinform::ParseError("cocycle push needs --rep");
    const auto pushed = spinform::pushforward(data, spinform::parse_representation(rep));
    auto cert = spinform::check_cocycle(pushed, plan);
    cert.absorb(spinform::structure_check(pushed, plan), "structure");
    passed = cert.passed();
    out["representation"] = rep;
    out["transition"] = spinform::to_json(pushed);
    out["certificate"] = cert.to_json();
  } else if (action == "twist") {
    const auto units = spinform::units_from_json(read_json(files[1]));
    const auto twisted = spinform::twist_by_unit(data, units, plan);
    passed = twisted.report.passed();
    out["transition"] = spinform::to_json(twisted.data);
    out["structure"] = twisted.report.witness().at("structure");
    if (twisted.report.witness().contains("warning")) {
      out["warning"] = twisted.report.witness().at("warning");
      std::cerr << "warning: " << twisted.report.witness().at("warning").get<std::string>() << "\n";
    }
    out["certificate"] = twisted.report.to_json();
  } else {
    const auto h = spinform::trivialization_from_json(read_json(files[1]));
    const auto cert = spinform::verify_coboundary_witness(data, h, plan);
    passed = cert.passed();
    out["certificate"] = cert.to_json();
  }
  emit(out, opt);
  return status_code(passed);
}

void add_common(CLI::App* app, Options& opt) {
  app->add_option("--field", opt.field, "q or fp:<p>")->capture_default_str();
  app->add_option("--seed", opt.seed, "64-bit seed")->capture_default_str();
  app->add_option("--trials", opt.trials, "samples per check")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--out", opt.out, "write JSON here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact quadratic forms, sporadic spin isogenies and their certificates"};
  app.require_subcommand(1);
  Options opt;

  std::vector<std::string> names;
  auto* verify = app.add_subcommand("verify", "run verification checks and print a manifest");
  std::vector<std::string> allowed(spinform::kCheckNames.begin(), spinform::kCheckNames.end());
  allowed.push_back("homomorphisms");
  allowed.push_back("all");
  verify->add_option("checks", names, "check names or 'all'")->required()->check(CLI::IsMember(allowed));
  add_common(verify, opt);

  std::string form_action;
  std::vector<std::string> form_files;
  auto* form = app.add_subcommand("form", "diagonalize, Witt-decompose or compare forms");
  form->add_option("action", form_action)->required()->check(CLI::IsMember({"diagonalize", "witt", "isometric"}));
  form->add_option("files", form_files, "form JSON files")->required();
  add_common(form, opt);

  std::string cocycle_action;
  std::vector<std::string> cocycle_files;
  std::string rep;
  auto* cocycle = app.add_subcommand("cocycle", "check, push forward, twist or trivialize transition data");
  cocycle->add_option("action", cocycle_action)->required()->check(CLI::IsMember({"check", "push", "twist", "witness"}));
  cocycle->add_option("files", cocycle_files, "transition data, then units or witness")->required();
  cocycle->add_option("--rep", rep, "spin3, spin4_diag or spin6_hyp3");
  add_common(cocycle, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*verify) return cmd_verify(names, opt);
    if (*form) return cmd_form(form_action, form_files, opt);
    return cmd_cocycle(cocycle_action, cocycle_files, rep, opt);
  } catch (const spinform::WrongField& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitWrongField;
  } catch (const spinform::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return kExitUsage;
  }
}
