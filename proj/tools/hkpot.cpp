#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hkpot/documents.hpp"
#include "hkpot/lie_classical.hpp"
#include "hkpot/potentials.hpp"
#include "hkpot/suites.hpp"

using namespace hkpot;
using nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kParse = 2, kMembership = 3, kDisagreement = 4 };

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("cannot parse number '" + s + "'");
  }
  if (used != s.size()) throw InputError("cannot parse number '" + s + "'");
  return v;
}

// Accepts 2, -1.5, 3i, -i, 1+2i, 1e-3-4.5i.
Complex parse_complex(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw InputError("empty number");
  if (s.back() != 'i') return {parse_real(s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t cut = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;)
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      cut = k;
      break;
    }
  const std::string re = cut == std::string::npos ? "" : body.substr(0, cut);
  std::string im = cut == std::string::npos ? body : body.substr(cut);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : parse_real(re), parse_real(im)};
}

std::vector<Complex> parse_complex_list(const std::string& s) {
  std::vector<Complex> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_complex(item));
  return out;
}

JordanType parse_jordan(const std::string& s) {
  std::vector<int> parts;
  for (const auto& item : split(s, ',')) {
    const double v = parse_real(trim(item));
    if (v != static_cast<int>(v)) throw InputError("Jordan block sizes must be integers");
    parts.push_back(static_cast<int>(v));
  }
  return JordanType(parts);
}

CanonicalFiberParams parse_fiber(const std::string& s, FiberVariant variant) {
  CanonicalFiberParams p;
  std::array<Complex, 3> w{};
  bool any_w = false;
  for (const auto& item : split(s, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("fiber parameters look like a=1,b=0,v=1");
    const std::string key = trim(item.substr(0, eq));
    const Complex val = parse_complex(item.substr(eq + 1));
    if (key == "a") {
      p.a = val;
    } else if (key == "b") {
      p.b = val;
    } else if (key == "v" || key == "v1") {
      p.v[0] = val;
    } else if (key == "v2" || key == "v3") {
      p.v[key[1] - '1'] = val;
    } else if (key == "w1" || key == "w2" || key == "w3") {
      w[key[1] - '1'] = val;
      any_w = true;
    } else {
      throw InputError("unknown fiber parameter '" + key + "'");
    }
  }
  if (variant == FiberVariant::F324) p.w = w;
  else if (any_w) throw InputError("the (3,2,2) fiber takes no w");
  return p;
}

struct Input {
  std::string algebra;
  std::string jordan;
  std::string params;
  std::string fiber;
  std::string file;
  std::string regular_sl3;
  bool random = false;
  std::uint64_t seed = 0;
};

struct Built {
  OrbitElement elem;
  std::optional<CanonicalFiberParams> fiber;
  std::optional<JordanType> jt;
  ordered_json echo;
};

Built build_input(const Input& in, const Tolerances& tol) {
  Built out;
  ordered_json echo;
  if (!in.file.empty()) {
    std::ifstream f(in.file);
    if (!f) throw InputError("cannot open '" + in.file + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    const MatrixDocument doc = parse_matrix_document(ss.str());
    out.elem = document_to_element(doc, tol);
    echo["file"] = in.file;
    echo["document"] = to_json(doc);
    out.echo = echo;
    return out;
  }
  if (!in.regular_sl3.empty()) {
    const auto v = parse_complex_list(in.regular_sl3);
    if (v.size() != 3) throw InputError("--regular-sl3 takes a,b,c");
    CMatrix x = CMatrix::Zero(3, 3);
    x(0, 1) = v[0];
    x(0, 2) = v[1];
    x(1, 2) = v[2];
    out.elem = OrbitElement{x, AlgebraKind::make(Family::SL, 3), BilinearForm::identity(3)};
    echo["regular_sl3"] = in.regular_sl3;
    out.echo = echo;
    return out;
  }
  if (in.algebra.empty() || in.jordan.empty())
    throw InputError("give --file, --regular-sl3, or --algebra with --jordan");
  const Family fam = parse_family(in.algebra);
  const JordanType jt = parse_jordan(in.jordan);
  const AlgebraKind alg = AlgebraKind::make(fam, jt.size());
  if (!jt.valid_for(fam)) throw InputError("Jordan type (" + jt.str() + ") is not valid for " + in.algebra);
  echo["algebra"] = in.algebra;
  echo["jordan"] = jt.parts;
  out.jt = jt;
  if (!in.fiber.empty()) {
    if (fam != Family::SO || jt.count(3) != 1 || jt.longest() != 3 || (jt.count(2) != 2 && jt.count(2) != 4))
      throw InputError("--fiber needs --algebra so with --jordan 3,2,2,... or 3,2,2,2,2,...");
    const FiberVariant variant = jt.count(2) == 2 ? FiberVariant::F322 : FiberVariant::F324;
    const int base = variant == FiberVariant::F322 ? 7 : 11;
    const CanonicalFiberParams p = parse_fiber(in.fiber, variant);
    out.elem = to_standard_form(canonical_fiber(p, variant, jt.size() - base), tol);
    const JordanType got = jordan_type_of(out.elem.matrix, tol);
    if (got != jt)
      throw MembershipError("fiber parameters give Jordan type (" + got.str() + "), not (" + jt.str() + ")");
    if (variant == FiberVariant::F324) out.fiber = p;
    echo["fiber"] = in.fiber;
  } else if (in.random) {
    Rng rng(in.seed);
    out.elem = random_orbit_element(jt, alg, rng);
    echo["random"] = true;
    echo["seed"] = in.seed;
  } else {
    out.elem = to_standard_form(jordan_representative(jt, alg, in.params.empty() ? std::vector<Complex>{} : parse_complex_list(in.params)), tol);
    if (!in.params.empty()) echo["params"] = in.params;
  }
  out.echo = echo;
  return out;
}

void print_report(const PotentialReport& rep) {
  std::cout << rep.algebra << ", Jordan type (" << rep.jordan_type.str() << ")\n";
  std::cout << std::setprecision(12);
  for (const auto& [name, m] : rep.methods) {
    std::cout << "  " << std::left << std::setw(12) << name << std::right << " ";
    if (m.status == "ok")
      std::cout << "rho = " << m.rho;
    else
      std::cout << m.status;
    if (!m.detail.empty() && m.status != "ok") std::cout << " (" << m.detail << ")";
    std::cout << "\n";
  }
  if (rep.oracle)
    std::cout << "  oracle residual " << rep.oracle->residual << ", " << rep.oracle->iterations << " iterations, "
              << rep.oracle->restarts << " restarts, seed " << rep.oracle->seed << "\n";
  std::cout << "  c1 = " << rep.invariants.c1 << ", c2 = " << rep.invariants.c2 << ", c21 = " << rep.invariants.c21
            << ", kappa = " << rep.invariants.kappa << "\n";
  std::cout << "  spec(X*X):";
  for (const auto& g : rep.spectrum) std::cout << " " << g.value << " (x" << g.multiplicity << ")";
  std::cout << "\n";
  std::cout << "  max pairwise deviation " << rep.max_pairwise_deviation << "\n";
  if (!rep.flags.empty()) {
    std::cout << "  flags:";
    for (const auto& f : rep.flags) std::cout << " " << f;
    std::cout << "\n";
  }
}

int cmd_potential(const Input& in, bool oracle, bool json, double agree_tol, const Tolerances& tol) {
  const Built b = build_input(in, tol);
  OracleOptions oo;
  oo.enabled = oracle;
  oo.solve.seed = in.seed;
  const PotentialReport rep = compute_all(b.elem, tol, oo, b.fiber);
  if (json)
    std::cout << report_to_json(rep, b.echo).dump(2) << "\n";
  else
    print_report(rep);
  if (!rep.all_ok() || rep.max_pairwise_deviation > agree_tol) {
    std::cerr << "error[disagreement]: methods failed or disagree beyond " << agree_tol << "\n";
    return kDisagreement;
  }
  return kOk;
}

int cmd_generate(const Input& in, const Tolerances& tol) {
  const Built b = build_input(in, tol);
  std::cout << to_json(document_from_element(b.elem, b.jt)).dump(2) << "\n";
  return kOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int count, bool json) {
  const std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
  bool ok = true;
  ordered_json out = ordered_json::array();
  for (const auto& name : names) {
    const SuiteResult r = run_suite(name, seed, count);
    ok = ok && r.ok();
    ordered_json js;
    js["suite"] = name;
    js["seed"] = seed;
    js["count"] = count;
    js["pass"] = r.ok();
    js["properties"] = ordered_json::array();
    if (!json) std::cout << (r.ok() ? "PASS " : "FAIL ") << name << " (seed " << seed << ", count " << count << ")\n";
    for (const auto& p : r.properties) {
      ordered_json jp{{"name", p.name}, {"passed", p.passed}, {"total", p.total}, {"worst", p.worst},
                      {"tolerance", p.tolerance}};
      if (p.failing_seed) {
        jp["failing_seed"] = *p.failing_seed;
        jp["failure"] = p.failure;
      }
      js["properties"].push_back(jp);
      if (json) continue;
      std::cout << "  " << p.passed << "/" << p.total << "  worst " << std::setprecision(3) << p.worst << " (tol "
                << p.tolerance << ")  " << p.name << "\n";
      if (p.failing_seed)
        std::cout << "    first failure at seed " << *p.failing_seed << ": " << p.failure << "\n";
    }
    out.push_back(js);
  }
  if (json) std::cout << out.dump(2) << "\n";
  return ok ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HyperKahler potentials of nilpotent orbits in classical Lie algebras"};
  app.require_subcommand(1);

  Input in;
  bool oracle = false;
  bool json = false;
  double agree_tol = Tolerances{}.check_tol;
  std::string suite;
  int count = 20;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--algebra", in.algebra, "sl, so or sp");
    sub->add_option("--jordan", in.jordan, "Jordan type, e.g. 3,2,2");
    sub->add_option("--params", in.params, "per-block scales, e.g. 3,4 or 1+2i,1");
    sub->add_option("--fiber", in.fiber, "fiber entries, e.g. a=1,b=0,v=1 (v1..v3, w1..w3 for 3,2,2,2,2)");
    sub->add_option("--file", in.file, "matrix document (JSON)");
    sub->add_flag("--random", in.random, "generic element of the orbit drawn from --seed");
    sub->add_option("--seed", in.seed, "seed for every random choice (default 0)");
    sub->add_option("--tol", agree_tol, "largest accepted relative disagreement between methods (default 1e-6)")
        ->check(CLI::NonNegativeNumber);
  };

  auto* pot = app.add_subcommand("potential", "compute rho by every applicable method");
  add_input(pot);
  pot->add_option("--regular-sl3", in.regular_sl3, "a,b,c of [[0,a,b],[0,0,c],[0,0,0]] in sl(3)");
  pot->add_flag("--oracle", oracle, "also solve the moment-map equations numerically");
  pot->add_flag("--json", json, "machine-readable report");

  auto* gen = app.add_subcommand("generate", "write a matrix document");
  add_input(gen);

  auto* ver = app.add_subcommand("verify", "run a property suite");
  ver->add_option("--suite", suite, "suite name or 'all'")->required();
  ver->add_option("--seed", in.seed, "base seed (default 0)");
  ver->add_option("--count", count, "samples per suite")->check(CLI::PositiveNumber);
  ver->add_flag("--json", json, "machine-readable summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    const Tolerances tol;
    if (*pot) return cmd_potential(in, oracle, json, agree_tol, tol);
    if (*gen) return cmd_generate(in, tol);
    return cmd_verify(suite, in.seed, count, json);
  } catch (const MembershipError& e) {
    std::cerr << "error[membership]: " << e.what() << "\n";
    return kMembership;
  } catch (const InputError& e) {
    std::cerr << "error[input]: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "error[numerical]: " << e.what() << "\n";
    return kFailure;
  }
}
