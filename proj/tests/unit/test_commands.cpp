#include <doctest.h>

#include <string>

#include "geomech/commands.hpp"
#include "geomech/error.hpp"

using gm::Json;

namespace {

gm::SystemSpec load(const char* name) {
  return gm::SystemSpec::load_file(std::string(GM_SYSTEMS_DIR) + "/" + name + ".json");
}

gm::CommandOutcome run(const char* system, const char* cmd, Json options) {
  return gm::run_command(load(system), cmd, options);
}

}  // namespace

TEST_CASE("command list") {
  const auto& names = gm::command_names();
  CHECK(names.size() == 13);
  for (const char* c : {"bracket", "first-integral", "noether", "lagrangian", "lax", "pencil", "jacobi", "hojman",
                        "liealg", "quadrature2d", "hamilton-jacobi", "integrate", "certify-liouville"}) {
    CHECK(std::find(names.begin(), names.end(), c) != names.end());
  }
  CHECK_THROWS_AS(run("oscillator1d", "nope", Json::object()), gm::NotFound);
}

TEST_CASE("report envelope") {
  const gm::CommandOutcome o =
      run("oscillator2d", "certify-liouville", {{"hamiltonian", "H"}, {"integrals", {"H1", "H2"}}});
  CHECK(o.pass);
  std::vector<std::string> keys;
  for (const auto& [k, v] : o.report.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"tool_version", "command", "system", "seed", "samples", "tolerances",
                                         "verdict", "result"});
  CHECK(o.report["seed"] == 42);
  CHECK(o.report["samples"] == 100);
  CHECK(o.report["verdict"] == "pass");
  CHECK(o.report["system"] == "oscillator2d");
}

TEST_CASE("superintegrability through the command") {
  const gm::CommandOutcome o = run("oscillator2d", "certify-liouville",
                                   {{"hamiltonian", "H"}, {"integrals", "H,H1"}, {"extra", "Lz"}});
  CHECK(o.pass);
  CHECK(o.report["result"]["certificate"]["joint_rank"] == 3);
  CHECK(o.report["result"]["certificate"]["superintegrable"] == true);
}

TEST_CASE("precondition failures become failing reports") {
  const gm::CommandOutcome o = run("lutzky", "hojman", {{"field", "Gamma"}, {"symmetry", "Y"}});
  CHECK_FALSE(o.pass);
  CHECK(o.precondition_failed);
  CHECK(o.report["verdict"] == "fail");
  CHECK(o.report["precondition"]["check"] == "divergence");
  std::vector<std::string> keys;
  for (const auto& [k, v] : o.report.items()) keys.push_back(k);
  CHECK(keys[7] == "precondition");
  CHECK(keys[8] == "result");
}

TEST_CASE("Hojman with the Hessian multiplier") {
  const gm::CommandOutcome o =
      run("lutzky", "hojman", {{"field", "Gamma"}, {"symmetry", "Y"}, {"lagrangian", "L"}, {"hessian_multiplier", true}});
  CHECK(o.pass);
}

TEST_CASE("brackets") {
  const gm::CommandOutcome o = run("lie_examples", "bracket", {{"X", "Dx"}, {"Y", "xDx"}, {"expect", "Dx"}});
  CHECK(o.pass);
  const gm::CommandOutcome bad = run("lie_examples", "bracket", {{"X", "Dx"}, {"Y", "xDx"}, {"expect", "Dy"}});
  CHECK_FALSE(bad.pass);
}

TEST_CASE("first integrals and Noether") {
  CHECK(run("oscillator1d", "first-integral", {{"field", "XH"}, {"function", "H"}}).pass);
  CHECK(run("oscillator1d", "first-integral", {{"field", "XH"}, {"function", "H^2 + 3"}}).pass);
  CHECK_FALSE(run("oscillator1d", "first-integral", {{"field", "XH"}, {"function", "q"}}).pass);
  const gm::CommandOutcome n =
      run("central_potential", "noether", {{"lagrangian", "L"}, {"symmetry", "rot"}, {"from", {1, 0, 0, 1}}, {"T", 50}});
  CHECK(n.pass);
}

TEST_CASE("Lax and pencil commands") {
  CHECK(run("oscillator2d", "lax", {{"hamiltonian", "H"}, {"tensor", "R"}, {"from", "1,0,0,1"}, {"T", 10}}).pass);
  // R = diag(2,1,2,1) is constant: its traces carry no information.
  CHECK(run("oscillator2d", "lax", {{"hamiltonian", "H"}, {"tensor", "R"}}).report["result"]["trace_joint_rank"] == 0);
  // Tr A^k for diag(H1, H2, H1, H2) are power sums of H1 and H2.
  const gm::CommandOutcome sep = run("oscillator2d", "lax", {{"hamiltonian", "H"}, {"tensor", "R_sep"}, {"kmax", 4}});
  CHECK(sep.pass);
  CHECK(sep.report["result"]["trace_joint_rank"] == 2);
  const gm::CommandOutcome p = run("oscillator2d", "pencil", {{"form", "omega_prime"}, {"at", "0.1,0.2,0.3,0.4"}});
  CHECK(p.pass);
}

TEST_CASE("liealg, quadrature and Hamilton-Jacobi commands") {
  const gm::CommandOutcome l = run("lie_examples", "liealg", {{"fields", "Dx,Dy,xDy"}});
  CHECK(l.pass);
  CHECK(l.report["result"]["algebra"]["nilpotent"] == true);
  CHECK(run("planar", "quadrature2d", {{"X1", "X1"}, {"X2", "X2"}, {"base", "1,1"}}).pass);
  CHECK(run("hamilton_jacobi", "hamilton-jacobi",
            {{"hamiltonian", "H"}, {"generating", "S"}, {"from", "0"}, {"T", 1}})
            .pass);
}

TEST_CASE("integrate reports the trajectory") {
  const gm::CommandOutcome o = run("oscillator1d", "integrate", {{"field", "XH"}, {"from", "1,0"}, {"T", 1}});
  CHECK(o.pass);
  CHECK(o.report["result"]["states"].size() >= 2);
  const gm::CommandOutcome out = run("oscillator1d", "integrate", {{"field", "XH"}, {"from", "1.9,1.9"}, {"T", 10}});
  CHECK_FALSE(out.pass);
}

TEST_CASE("reports are deterministic") {
  const Json opts = {{"hamiltonian", "H"}, {"integrals", {"H1", "H2"}}, {"seed", 7}, {"samples", 30}};
  const std::string a = run("oscillator2d", "certify-liouville", opts).report.dump();
  const std::string b = run("oscillator2d", "certify-liouville", opts).report.dump();
  CHECK(a == b);
  const std::string c =
      run("oscillator2d", "certify-liouville", {{"hamiltonian", "H"}, {"integrals", {"H1", "H2"}}}).report.dump();
  CHECK(a != c);
}

TEST_CASE("missing options are errors") {
  CHECK_THROWS_AS(run("oscillator1d", "first-integral", {{"field", "XH"}}), gm::Error);
  CHECK_THROWS_AS(run("oscillator1d", "first-integral", {{"field", "nope"}, {"function", "H"}}), gm::NotFound);
  CHECK_THROWS_AS(run("oscillator1d", "first-integral", {{"field", "XH"}, {"function", "nope"}}), gm::UnknownIdentifier);
}
