#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "hkpot/moment_solver.hpp"
#include "hkpot/potentials.hpp"
#include "hkpot/suites.hpp"

using namespace hkpot;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// Every property of every listed suite must pass on the stated sample count.
Outcome suites_pass(const std::vector<std::pair<std::string, int>>& runs, std::uint64_t seed = 0) {
  Outcome o{true, ""};
  std::ostringstream os;
  os.precision(2);
  for (const auto& [name, count] : runs) {
    const SuiteResult r = run_suite(name, seed, count);
    o.pass = o.pass && r.ok();
    for (const auto& p : r.properties) {
      os << name << ": " << p.passed << "/" << p.total << " worst " << p.worst << " (tol " << p.tolerance << ")";
      if (p.failing_seed) os << " first failure seed " << *p.failing_seed << ": " << p.failure;
      os << "; ";
    }
  }
  o.detail = os.str();
  return o;
}

Outcome criterion1() {
  CMatrix x = CMatrix::Zero(4, 4);
  x(0, 2) = 3.0;
  x(1, 3) = 4.0;
  const OrbitElement e{x, AlgebraKind::make(Family::SL, 4), BilinearForm::identity(4)};
  const double l2 = potential_length2(e);
  const double c2 = potential_coh2(e);
  const SolveResult s = solve_moment(e);
  std::ostringstream os;
  os.precision(17);
  os << "length2 " << l2 << ", coh2 " << c2 << ", oracle " << s.r2 << " (residual " << s.diagnostics.residual << ")";
  return {std::abs(l2 - 14.0) <= 1e-12 && std::abs(c2 - 14.0) <= 1e-12 && rel(s.r2, 14.0) <= 1e-5, os.str()};
}

Outcome criterion8() {
  auto element = [](double a, double b, double c) {
    CMatrix x = CMatrix::Zero(3, 3);
    x(0, 1) = a;
    x(0, 2) = b;
    x(1, 2) = c;
    return OrbitElement{x, AlgebraKind::make(Family::SL, 3), BilinearForm::identity(3)};
  };
  const Diagram d = Diagram::make({1, 2, 3}, AlgebraKind::make(Family::SL, 3));
  const double r111 = potential_sl3_regular(1.0, 1.0, 1.0);
  const double r101 = potential_sl3_regular(1.0, 0.0, 1.0);
  const SolveResult s111 = solve_moment(d, element(1, 1, 1));
  const SolveResult s101 = solve_moment(d, element(1, 0, 1));
  std::ostringstream os;
  os.precision(17);
  os << "formula " << r111 << ", " << r101 << "; oracle " << s111.r2 << " (residual " << s111.diagnostics.residual
     << "), " << s101.r2 << " (residual " << s101.diagnostics.residual << ")";
  const bool ok = r111 == 6.0 && rel(r101, 4.0 * std::numbers::sqrt2) <= 1e-15 && rel(s111.r2, 6.0) <= 1e-5 &&
                  rel(s101.r2, 4.0 * std::numbers::sqrt2) <= 1e-5 && s111.diagnostics.residual <= 1e-10 &&
                  s101.diagnostics.residual <= 1e-10;
  return {ok, os.str()};
}

std::string capture(const std::string& cmd, int& code) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    code = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

Outcome criterion10() {
  const std::vector<std::string> args{
      "potential --algebra so --jordan 3,2,2 --random --seed 5 --oracle --json",
      "potential --algebra sl --regular-sl3 1,0.5,2 --oracle --seed 9 --json",
      "potential --algebra sp --jordan 2,2,1,1 --random --seed 17 --oracle --json",
      "potential --algebra so --jordan 3,2,2,2,2 --fiber a=1,b=2i,v1=1,v2=0.5,w1=1,w3=1-i --json",
      "generate --algebra so --jordan 3,2,2,1 --random --seed 3",
  };
  int identical = 0;
  std::string failure;
  for (const auto& a : args) {
    int c1 = 0, c2 = 0;
    const std::string cmd = std::string(HKPOT_CLI) + " " + a + " 2>&1";
    const std::string o1 = capture(cmd, c1);
    const std::string o2 = capture(cmd, c2);
    if (c1 == 0 && c2 == 0 && !o1.empty() && o1 == o2)
      ++identical;
    else if (failure.empty())
      failure = "; differs or failed: " + a;
  }
  return {identical == static_cast<int>(args.size()),
          std::to_string(identical) + "/" + std::to_string(args.size()) + " invocations byte-identical" + failure};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double budget_s;  // 0: no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "A = diag(3,4) in sl(4): rho = 14 by length2, coh2 and the oracle", 5, criterion1},
      {2, "explicit length-2 factorization r^2 = potential_length2 (50 samples)", 10,
       [] { return suites_pass({{"length2-factorization", 50}}); }},
      {3, "even multiplicities of spec(X*X) in so(n<=12) (200 samples)", 10,
       [] { return suites_pass({{"even-multiplicity", 200}}); }},
      {4, "minimal orbits: potential_minimal = potential_length2, multiplicity kappa (30 per family)", 0,
       [] { return suites_pass({{"minimal", 90}}); }},
      {5, "(3,1^(n-3)) in so(n): lift = coh2 (30 samples)", 0, [] { return suites_pass({{"lift-coh2", 30}}); }},
      {6, "(3,2,2) fibres: closed form = lift, c1^2 - c2 - 2c21 = 8|a|^2|v|^2 (30 samples)", 0,
       [] { return suites_pass({{"fiber322", 30}}); }},
      {7, "(3,2^4) fibres: cubic = lift, roots = double eigenvalues (30 samples)", 0,
       [] { return suites_pass({{"cubic324", 30}}); }},
      {8, "sl(3): rho(1,1,1) = 6, rho(1,0,1) = 4 sqrt2, oracle agrees", 60, criterion8},
      {9, "property suites: homogeneity, conjugation, gauge, Jacobian, lift sign", 0,
       [] {
         return suites_pass(
             {{"homogeneity", 100}, {"conjugation", 100}, {"gauge", 100}, {"jacobian", 20}, {"lift-sign", 50}});
       }},
      {10, "repeated CLI runs with identical seeds give byte-identical output", 0, criterion10},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += " [over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget]";
    }
    if (!o.pass) ++failed;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3f s", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << "  [" << timing << "]\n"
              << "      " << o.detail << "\n";
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - failed << "/" << criteria.size() << "\n";
  return failed ? 1 : 0;
}
