// ymjoin command-line driver.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ymjoin/damping.hpp"
#include "ymjoin/eigenmaps.hpp"
#include "ymjoin/results.hpp"
#include "ymjoin/solvers.hpp"

using namespace ymjoin;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNoConvergence = 2, kBranchNotFound = 3, kUnsatisfied = 4, kVerifyFailed = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SchemaError("cannot read " + path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// key=value lines become --key=value unless the flag is already on the command line.
std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config file " + path);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    std::string flag = "--" + key;
    bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (!given) args.push_back(flag + "=" + value);
  }
  return args;
}

std::pair<int, int> parse_range(const std::string& s) {
  auto colon = s.find(':');
  try {
    if (colon == std::string::npos) {
      int v = std::stoi(s);
      return {v, v};
    }
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError("bad range '" + s + "' (expected lo:hi)");
  }
}

Eigenmap parse_eig(const std::string& spec) {
  try {
    return parse_eigenmap_spec(spec);
  } catch (const std::exception& e) {
    throw UsageError(std::string("invalid eigenmap spec: ") + e.what());
  }
}

struct SolveFlags {
  std::string method = "minimize";
  int nodes = 2048;
  std::string scheme = "uniform_s";
  double half_length = 12;
  int max_iterations = 200;
  double tolerance = 1e-6;
  std::string seed_profile = "levi-civita";
  double perturbation = 0;
  double box_lo = 1e-9, box_hi = 50;
  std::string out, csv;
};

void add_solve_flags(CLI::App* c, SolveFlags& f, bool join) {
  c->add_option("--grid", f.nodes, "number of grid nodes");
  c->add_option("--scheme", f.scheme, "uniform_s | uniform_t | chebyshev_t");
  c->add_option("--half-length", f.half_length, "S for uniform_s grids");
  c->add_option("--max-iter", f.max_iterations);
  c->add_option("--out", f.out, "result JSON path");
  c->add_option("--csv", f.csv, "profile CSV path");
  if (join) {
    c->add_option("--method", f.method, "minimize | shoot");
    c->add_option("--tol", f.tolerance, "residual tolerance for the minimizer");
    c->add_option("--seed-profile", f.seed_profile, "levi-civita | constant01 | constant10");
    c->add_option("--perturb", f.perturbation, "seed perturbation amplitude");
  } else {
    c->add_option("--box-lo", f.box_lo, "smallest shooting slope");
    c->add_option("--box-hi", f.box_hi, "largest shooting slope");
  }
}

SolveOptions make_options(const SolveFlags& f, std::uint64_t seed) {
  SolveOptions o;
  try {
    o.method = parse_method(f.method);
    o.grid.scheme = parse_scheme(f.scheme);
    o.seed = parse_seed(f.seed_profile);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (f.nodes < 16) throw UsageError("--grid must be at least 16");
  o.grid.nodes = f.nodes;
  o.grid.half_length = f.half_length;
  o.max_iterations = f.max_iterations;
  o.residual_tolerance = f.tolerance;
  o.seed_perturbation = f.perturbation;
  o.rng_seed = seed;
  o.shooting_box = {f.box_lo, f.box_hi};
  return o;
}

void emit(const SolveFlags& f, const nlohmann::json& result, const Profile& profile) {
  if (!f.out.empty()) write_text(f.out, result.dump(2) + "\n");
  if (!f.csv.empty()) {
    std::ostringstream os;
    write_csv(os, profile);
    write_text(f.csv, os.str());
  }
}

void print_report(const DampingReport& r) {
  std::cout << condition_name(r.set) << ": " << (r.satisfied ? "satisfied" : "not satisfied (existence unknown)")
            << "  margin " << num(r.margin) << (r.exact ? "  [exact]" : "") << "\n";
  for (auto& c : r.clauses) {
    std::cout << "  " << c.label << "  " << clause_state_name(c.state) << "  " << c.expression;
    for (auto& [k, v] : c.quantities) std::cout << "  " << k << "=" << num(v);
    std::cout << "\n";
  }
  if (r.existence_minimizer) std::cout << "  minimizer exists: " << (*r.existence_minimizer ? "yes" : "unknown") << "\n";
  if (r.countably_many) std::cout << "  countably many: " << (*r.countably_many ? "yes" : "unknown") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Yang-Mills join and suspension solver"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 1;
  std::string config;
  app.add_option("--seed", seed, "RNG seed (all randomness is derived from it)");
  app.add_option("--config", config, "key=value file mirroring the flags");

  // catalog
  auto* cat = app.add_subcommand("catalog", "list eigenmaps");
  std::string cat_family;
  int cat_m = -1, cat_ell = -1, cat_max_m = 12, cat_max_ell = 6;
  bool cat_json = false;
  cat->add_option("--family", cat_family);
  cat->add_option("--m", cat_m);
  cat->add_option("--ell", cat_ell);
  cat->add_option("--max-m", cat_max_m);
  cat->add_option("--max-ell", cat_max_ell);
  cat->add_flag("--json", cat_json);

  // solve-join
  auto* sj = app.add_subcommand("solve-join", "solve the join boundary-value problem");
  std::string eig1, eig2;
  SolveFlags sjf;
  sj->add_option("--eig1", eig1)->required();
  sj->add_option("--eig2", eig2)->required();
  add_solve_flags(sj, sjf, true);

  // solve-suspension
  auto* ss = app.add_subcommand("solve-suspension", "solve the suspension boundary-value problem");
  std::string seig, s_mu, s_lambda;
  int s_m1 = -1, nodal = 0;
  SolveFlags ssf;
  ss->add_option("--eig", seig);
  ss->add_option("--m1", s_m1);
  ss->add_option("--lambda", s_lambda);
  ss->add_option("--mu", s_mu);
  ss->add_option("--nodal", nodal, "nodal index");
  add_solve_flags(ss, ssf, false);

  // check
  auto* ck = app.add_subcommand("check", "evaluate the existence conditions");
  std::string c_eig1, c_eig2, c_eig, c_mu, c_csv;
  int c_m1 = -1;
  bool c_sweep = false, c_suspension = false, c_json = false;
  std::string f1 = "id", f2 = "id", r1 = "2:12", r2 = "2:12";
  int ell1 = 1, ell2 = 1;
  ck->add_option("--eig1", c_eig1);
  ck->add_option("--eig2", c_eig2);
  ck->add_flag("--sweep", c_sweep);
  ck->add_flag("--suspension", c_suspension);
  ck->add_option("--eig", c_eig, "eigenmap for --suspension");
  ck->add_option("--m1", c_m1, "m1 for --suspension");
  ck->add_option("--mu", c_mu, "mu1 for --suspension");
  ck->add_option("--family1", f1);
  ck->add_option("--family2", f2);
  ck->add_option("--range1", r1, "m range lo:hi of the first factor");
  ck->add_option("--range2", r2, "m range lo:hi of the second factor");
  ck->add_option("--ell1", ell1);
  ck->add_option("--ell2", ell2);
  ck->add_option("--csv", c_csv, "write the sweep table here");
  ck->add_flag("--json", c_json);

  // verify
  auto* vf = app.add_subcommand("verify", "re-check a stored result");
  std::string v_path;
  vf->add_option("result", v_path)->required();

  // plot
  auto* pl = app.add_subcommand("plot", "render a stored result as SVG");
  std::string p_path, p_out;
  pl->add_option("result", p_path)->required();
  pl->add_option("--out", p_out)->required();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = apply_config(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*cat) {
      CatalogFilter filter;
      if (!cat_family.empty()) {
        try {
          filter.family = parse_family(cat_family);
        } catch (const std::exception& e) {
          throw UsageError(e.what());
        }
      }
      if (cat_m >= 0) filter.m = cat_m;
      if (cat_ell >= 0) filter.ell = cat_ell;
      filter.max_m = cat_max_m;
      filter.max_ell = cat_max_ell;
      auto list = catalog(filter);
      if (cat_json) {
        nlohmann::json j = nlohmann::json::array();
        for (auto& e : list) j.push_back(to_json(e));
        std::cout << j.dump(2) << "\n";
      } else {
        for (auto& e : list) {
          std::cout << to_spec(e) << "  m=" << e.m << " n=" << e.n << " lambda=" << to_string(e.lambda)
                    << " mu=" << to_string(e.mu) << "\n";
        }
      }
      return kOk;
    }

    if (*sj) {
      Eigenmap e1 = parse_eig(eig1), e2 = parse_eig(eig2);
      if (e1.m == 0 || e2.m == 0) throw UsageError("m = 0 is a suspension: use solve-suspension");
      JoinProblem p = make_join(e1, e2);
      SolveOptions o = make_options(sjf, seed);
      SolveResult r;
      try {
        r = solve_join(p, o);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      auto result = make_result(p, o, r);
      emit(sjf, result, r.profile);
      std::cout << "J=" << num(r.report.J) << " residual=" << num(r.report.el_residual_sup)
                << " class=" << classification_name(r.report.classification, r.report.nodal_index)
                << (r.report.converged ? "" : " NOT CONVERGED: " + r.report.message) << "\n";
      return r.report.converged ? kOk : kNoConvergence;
    }

    if (*ss) {
      if (nodal < 0) throw UsageError("--nodal must be nonnegative");
      SuspensionProblem p;
      Rational mu_exact;
      if (!seig.empty()) {
        if (s_m1 >= 0 || !s_mu.empty() || !s_lambda.empty()) throw UsageError("give either --eig or --m1/--lambda/--mu");
        Eigenmap e = parse_eig(seig);
        p = make_suspension(e);
        mu_exact = e.mu;
      } else {
        if (s_m1 < 1 || s_mu.empty()) throw UsageError("need --eig or --m1 and --mu");
        try {
          mu_exact = parse_rational(s_mu);
          double lambda = s_lambda.empty() ? double(s_m1) : to_double(parse_rational(s_lambda));
          p = make_suspension(s_m1, lambda, to_double(mu_exact));
        } catch (const std::exception& e) {
          throw UsageError(e.what());
        }
      }
      if (!(p.u1 > 0)) throw UsageError("suspension needs mu1 > 0");
      SolveOptions o = make_options(ssf, seed);
      try {
        auto r = solve_suspension(p, nodal, o);
        auto result = make_result(p, o, r);
        emit(ssf, result, r.profile);
        std::cout << "J=" << num(r.report.J) << " residual=" << num(r.report.el_residual_sup)
                  << " slope=" << num(r.report.details.value("slope", 0.0))
                  << " class=" << classification_name(r.report.classification, r.report.nodal_index)
                  << (r.report.converged ? "" : " NOT CONVERGED: " + r.report.message) << "\n";
        return r.report.converged ? kOk : kNoConvergence;
      } catch (const BranchNotFound& e) {
        std::cout << "branch not found: " << e.what() << "\n";
        auto rep = check_suspension(int(p.m1), mu_exact);
        print_report(rep);
        if (!ssf.out.empty()) {
          write_text(ssf.out, nlohmann::json{{"version", kResultVersion},
                                             {"problem", to_json(p)},
                                             {"error", e.what()},
                                             {"thresholds", to_json(rep)}}
                                      .dump(2) + "\n");
        }
        return kBranchNotFound;
      }
    }

    if (*ck) {
      int modes = int(c_sweep) + int(c_suspension) + int(!c_eig1.empty() || !c_eig2.empty());
      if (modes != 1) throw UsageError("choose exactly one of --eig1/--eig2, --sweep, --suspension");
      if (c_suspension) {
        int m1;
        Rational mu;
        if (!c_eig.empty()) {
          Eigenmap e = parse_eig(c_eig);
          m1 = e.m;
          mu = e.mu;
        } else {
          if (c_m1 < 1 || c_mu.empty()) throw UsageError("--suspension needs --eig or --m1 and --mu");
          m1 = c_m1;
          try {
            mu = parse_rational(c_mu);
          } catch (const std::exception& e) {
            throw UsageError(e.what());
          }
        }
        DampingReport rep;
        try {
          rep = check_suspension(m1, mu);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        if (c_json) std::cout << to_json(rep).dump(2) << "\n";
        else print_report(rep);
        return rep.satisfied ? kOk : kUnsatisfied;
      }
      if (c_sweep) {
        FactorRange a, b;
        try {
          a.family = parse_family(f1);
          b.family = parse_family(f2);
        } catch (const std::exception& e) {
          throw UsageError(e.what());
        }
        std::tie(a.m_lo, a.m_hi) = parse_range(r1);
        std::tie(b.m_lo, b.m_hi) = parse_range(r2);
        a.ell = ell1;
        b.ell = ell2;
        auto rows = sweep(a, b);
        std::ostringstream os;
        write_sweep_csv(os, rows);
        if (!c_csv.empty()) write_text(c_csv, os.str());
        if (c_json) std::cout << to_json(rows).dump(2) << "\n";
        else if (c_csv.empty()) std::cout << os.str();
        return kOk;
      }
      if (c_eig1.empty() || c_eig2.empty()) throw UsageError("check needs both --eig1 and --eig2");
      JoinProblem p = make_join(parse_eig(c_eig1), parse_eig(c_eig2));
      JoinVerdict v;
      try {
        v = check_join(p);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (c_json) {
        nlohmann::json j = nlohmann::json::array();
        for (auto& r : v.reports) j.push_back(to_json(r));
        std::cout << nlohmann::json{{"satisfied", v.satisfied}, {"reports", j}}.dump(2) << "\n";
      } else {
        for (auto& r : v.reports) print_report(r);
        std::cout << (v.satisfied ? "existence condition satisfied" : "existence unknown") << "\n";
      }
      return v.satisfied ? kOk : kUnsatisfied;
    }

    if (*vf) {
      try {
        auto rep = verify_result(read_json(v_path));
        for (auto& c : rep.checks) {
          std::cout << (c.pass ? "PASS " : "FAIL ") << c.name;
          if (c.tolerance > 0) std::cout << "  value=" << num(c.value) << " tol=" << num(c.tolerance);
          std::cout << "\n";
        }
        if (!rep.pass()) {
          std::cout << "verification failed: " << rep.first_failure() << "\n";
          return kVerifyFailed;
        }
        return kOk;
      } catch (const SchemaError& e) {
        std::cout << "verification failed: schema: " << e.what() << "\n";
        return kVerifyFailed;
      }
    }

    if (*pl) {
      try {
        write_text(p_out, render_svg(read_json(p_path)));
      } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
