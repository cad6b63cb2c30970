// Command-line front end. Talks to the library only through geomech.h.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstring>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "geomech/geomech.h"

namespace {

struct Flag {
  const char* name;  // without dashes; options JSON uses '_' for '-'
  const char* help;
};

const std::vector<Flag> kDynamics = {
    {"field", "vector field name (default X)"},
    {"hamiltonian", "use X_H for this scalar"},
    {"lagrangian", "use the second-order field of this Lagrangian"},
    {"omega", "symplectic form name (default omega)"},
    {"sode", "symbolic|procedural second-order field"},
};

const std::vector<Flag> kDrift = {
    {"from", "initial point, comma separated"},
    {"T", "integration time"},
    {"step", "step size (fixed step) or initial step"},
    {"method", "rk4|rkf45"},
    {"abs-tol", "rkf45 absolute tolerance"},
    {"rel-tol", "rkf45 relative tolerance"},
    {"drift-tol", "relative drift tolerance"},
};

struct Command {
  const char* name;
  const char* help;
  std::vector<std::vector<Flag>> flags;
};

std::vector<Command> commands() {
  return {
      {"bracket", "Lie bracket [X, Y]", {{{"X", "first field"}, {"Y", "second field"}, {"expect", "expected bracket"}}}},
      {"first-integral", "check X(F) = 0 and monitor drift", {{{"function", "scalar F"}}, kDynamics, kDrift}},
      {"noether",
       "Noether constant of a base symmetry",
       {{{"lagrangian", "Lagrangian (default L)"},
         {"symmetry", "base vector field"},
         {"gauge", "gauge scalar h with X^c(L) = dh/dt"},
         {"sode", "symbolic|procedural"}},
        kDrift}},
      {"lagrangian",
       "Cartan forms, energy and second-order field",
       {{{"lagrangian", "Lagrangian (default L)"}, {"compare", "second Lagrangian for gauge equivalence"},
         {"sode", "symbolic|procedural"}},
        kDrift}},
      {"lax",
       "Lax pair of an invariant (1,1)-tensor",
       {{{"tensor", "(1,1)-tensor (default R)"}, {"frame", "comma separated frame fields"},
         {"kmax", "highest trace power"}},
        kDynamics,
        kDrift}},
      {"pencil",
       "characteristic polynomial of a symplectic pencil",
       {{{"form", "second 2-form (default omega_prime)"}, {"symmetry", "build the form as L_Y omega"},
         {"at", "single evaluation point"}, {"route-tol", "route agreement tolerance"}},
        kDynamics,
        kDrift}},
      {"jacobi",
       "Jacobi last multiplier",
       {{{"multiplier", "multiplier scalar"}, {"volume", "volume density"}, {"scale", "rescaling function f"}},
        kDynamics}},
      {"hojman",
       "first integral from a non-Noether symmetry",
       {{{"symmetry", "symmetry field Y"}, {"h-scalar", "scalar h with [Y, X] = h X"}, {"multiplier", "multiplier scalar"},
         {"hessian-multiplier", "use det W of --lagrangian as multiplier"}, {"volume", "volume density"},
         {"lie-tol", "symmetry tolerance"}},
        kDynamics,
        kDrift}},
      {"liealg",
       "structure constants and solvability",
       {{{"fields", "comma separated fields"}, {"constancy-tol", "structure constant spread tolerance"}}}},
      {"quadrature2d",
       "first integral of a planar two-field system by quadrature",
       {{{"X1", "field with X1 F = 0 (default X1)"}, {"X2", "field with X2 F = 1 (default X2)"},
         {"base", "base point"}, {"region", "lo1,hi1,lo2,hi2"}, {"at", "points to evaluate F at"},
         {"contract-tol", "tolerance for X1 F and X2 F - 1"}}}},
      {"hamilton-jacobi",
       "Hamilton-Jacobi relatedness of a closed section",
       {{{"hamiltonian", "Hamiltonian (default H)"}, {"alpha", "comma separated section components"},
         {"generating", "generating function S"}, {"from", "initial base point"}, {"T", "lift time"},
         {"step", "RK4 step"}, {"hj-tol", "relatedness tolerance"}, {"lift-tol", "lift deviation tolerance"}}}},
      {"integrate",
       "integrate a field and monitor scalars",
       {{{"monitor", "comma separated scalars"}, {"every", "report every k-th state"}}, kDynamics, kDrift}},
      {"certify-liouville",
       "Liouville-Arnold certificate",
       {{{"hamiltonian", "Hamiltonian (default H)"}, {"integrals", "comma separated integrals"},
         {"extra", "additional candidate integrals"}, {"omega", "symplectic form name"}}}},
  };
}

std::string json_key(std::string name) {
  for (auto& c : name) {
    if (c == '-') c = '_';
  }
  return name;
}

int run(const std::string& command, const std::string& file, const nlohmann::ordered_json& options) {
  gm_system* sys = nullptr;
  if (gm_system_load_file(file.c_str(), &sys) != GM_OK) {
    std::cerr << "error: " << gm_last_error() << "\n";
    return 2;
  }
  char* report = nullptr;
  gm_verdict verdict = GM_FAIL;
  const gm_status s = gm_run(sys, command.c_str(), options.dump().c_str(), &report, &verdict);
  gm_system_free(sys);
  if (s != GM_OK && s != GM_PRECONDITION) {
    std::cerr << "error: " << gm_status_string(s) << ": " << gm_last_error() << "\n";
    return 2;
  }
  std::fwrite(report, 1, std::strlen(report), stdout);
  std::fputc('\n', stdout);
  gm_string_free(report);
  return verdict == GM_PASS ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geomech: verification toolkit for geometric mechanics"};
  app.set_version_flag("--version", gm_version());
  app.require_subcommand(1);

  std::string seed, samples, tol, box;
  app.add_option("--seed", seed, "sampling seed (default 42)");
  app.add_option("--samples", samples, "sample count (default 100)");
  app.add_option("--tol", tol, "residual tolerance (default 1e-8)");
  app.add_option("--box", box, "sampling box: lo,hi or lo1,hi1,lo2,hi2,...");

  const auto table = commands();
  std::string file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : table) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->fallthrough();
    sub->add_option("system", file, "system definition (JSON)")->required()->check(CLI::ExistingFile);
    for (const auto& group : c.flags) {
      for (const auto& f : group) {
        const std::string name = f.name;
        if (sub->get_option_no_throw("--" + name) != nullptr) continue;
        if (name == "hessian-multiplier") {
          sub->add_flag_callback("--" + name, [&values, name] { values[name] = "true"; }, f.help);
        } else {
          sub->add_option("--" + name, values[std::string(c.name) + "/" + name], f.help);
        }
      }
    }
    subs[c.name] = sub;
  }

  if (argc > 1 && argv[1][0] != '-' && subs.count(argv[1]) == 0) {
    std::cerr << "error: unknown subcommand '" << argv[1] << "'\n";
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (const auto& c : table) {
    if (!subs[c.name]->parsed()) continue;
    nlohmann::ordered_json options = nlohmann::ordered_json::object();
    if (!seed.empty()) options["seed"] = seed;
    if (!samples.empty()) options["samples"] = samples;
    if (!tol.empty()) options["tol"] = tol;
    if (!box.empty()) options["box"] = box;
    const std::string prefix = std::string(c.name) + "/";
    for (const auto& [k, v] : values) {
      if (v.empty()) continue;
      if (k == "hessian-multiplier") {
        options["hessian_multiplier"] = true;
      } else if (k.rfind(prefix, 0) == 0) {
        options[json_key(k.substr(prefix.size()))] = v;
      }
    }
    return run(c.name, file, options);
  }
  return 2;
}
