#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lintegra/drivers.hpp"
#include "lintegra/errors.hpp"
#include "lintegra/suite.hpp"

namespace {

using lintegra::DriveOptions;
using lintegra::DriveResult;
using lintegra::SpecFile;

struct SubState {
  std::string spec;
  std::string output;
  DriveOptions opt;
  // CLI11 needs stable storage for optional scalars; sentinel = unset.
  long n_max = -1;
  long N = -1;
  long T = -1;
  long seed = -1;
  long prime = -1;
  double rtol = -1;
  double atol = -1;
  std::string mode, route, site, format;
};

void finalize(SubState& st) {
  st.opt.spec_path = st.spec;
  if (st.n_max >= 0) st.opt.n_max = static_cast<int>(st.n_max);
  if (st.N >= 0) st.opt.N = st.N;
  if (st.T >= 0) st.opt.T = static_cast<int>(st.T);
  if (st.seed >= 0) st.opt.seed = static_cast<std::uint64_t>(st.seed);
  if (st.prime >= 0) st.opt.prime = static_cast<std::uint64_t>(st.prime);
  if (st.rtol >= 0) st.opt.rtol = st.rtol;
  if (st.atol >= 0) st.opt.atol = st.atol;
  if (!st.mode.empty()) st.opt.mode = st.mode;
  if (!st.route.empty()) st.opt.route = st.route;
  if (!st.site.empty()) st.opt.site = st.site;
  if (!st.format.empty()) st.opt.format = st.format;
}

int emit(const DriveResult& res, const std::string& output) {
  if (!output.empty()) {
    std::ofstream out(output, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write output file: " << output << "\n";
      return 2;
    }
    out << res.rendered;
  } else {
    std::cout << res.rendered;
  }
  if (!res.analysis_ok)
    std::cerr << "analysis failed; see the report's error/check fields\n";
  return res.analysis_ok ? 0 : 1;
}

void add_common(CLI::App* sub, SubState& st) {
  sub->add_option("spec,--spec", st.spec, "spec file to analyse")->required();
  sub->add_option("--output", st.output, "write the report to this file instead of stdout");
  sub->add_option("--seed", st.seed, "seed for all random draws of the run");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "analyses for linearisable discrete mappings and continuous flows:\n"
      "degree growth, singularity confinement, cascade linearisation,\n"
      "derivative matching, and ODE invariants"};
  app.require_subcommand(1);
  int rc = 0;

  SubState deg;
  CLI::App* deg_sub = app.add_subcommand("degree-growth", "degree sequence and growth class");
  add_common(deg_sub, deg);
  deg_sub->add_option("--n-max", deg.n_max, "steps to iterate");
  deg_sub->add_option("--mode", deg.mode, "exact | modular");
  deg_sub->add_option("--prime", deg.prime, "prime for modular runs");
  deg_sub->add_flag("--cross-check", deg.opt.cross_check, "exact/modular multi-seed consensus");
  deg_sub->add_option("--format", deg.format, "json | csv");
  deg_sub->callback([&] {
    finalize(deg);
    rc = emit(lintegra::drive_degree_growth(lintegra::load_specfile(deg.spec), deg.opt), deg.output);
  });

  SubState con;
  CLI::App* con_sub = app.add_subcommand("confine", "Laurent probe of singular sites");
  add_common(con_sub, con);
  con_sub->add_option("--T", con.T, "series truncation window");
  con_sub->add_option("--n-max", con.n_max, "probe length");
  con_sub->add_option("--site", con.site, "probe only the matching site (value or 'var = value')");
  con_sub->callback([&] {
    finalize(con);
    rc = emit(lintegra::drive_confine(lintegra::load_specfile(con.spec), con.opt), con.output);
  });

  SubState cas;
  CLI::App* cas_sub = app.add_subcommand("cascade", "direct vs linearised orbit routes");
  add_common(cas_sub, cas);
  cas_sub->add_option("--N", cas.N, "orbit length");
  cas_sub->add_option("--route", cas.route, "direct | linearised | both");
  cas_sub->callback([&] {
    finalize(cas);
    rc = emit(lintegra::drive_cascade(lintegra::load_specfile(cas.spec), cas.opt), cas.output);
  });

  SubState dm;
  CLI::App* dm_sub = app.add_subcommand("derivmatch", "discrete derivative-matching checks");
  add_common(dm_sub, dm);
  dm_sub->add_option("--N", dm.N, "orbit length");
  dm_sub->callback([&] {
    finalize(dm);
    rc = emit(lintegra::drive_derivmatch(lintegra::load_specfile(dm.spec), dm.opt), dm.output);
  });

  SubState ode;
  CLI::App* ode_sub = app.add_subcommand("ode", "continuous flows: invariants and routes");
  add_common(ode_sub, ode);
  ode_sub->add_option("--rtol", ode.rtol, "relative integration tolerance");
  ode_sub->add_option("--atol", ode.atol, "absolute integration tolerance");
  ode_sub->add_option("--route", ode.route, "riccati only: direct | linearised | both");
  ode_sub->callback([&] {
    finalize(ode);
    rc = emit(lintegra::drive_ode(lintegra::load_specfile(ode.spec), ode.opt), ode.output);
  });

  std::string corpus_dir = "corpus";
  CLI::App* suite_sub = app.add_subcommand("suite", "full acceptance battery over the corpus");
  suite_sub->add_option("corpus,--corpus", corpus_dir, "corpus directory");
  suite_sub->callback([&] {
    auto results = lintegra::run_acceptance(corpus_dir);
    std::cout << lintegra::format_acceptance(results);
    rc = lintegra::all_passed(results) ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const lintegra::ParseError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 2;
  } catch (const lintegra::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
