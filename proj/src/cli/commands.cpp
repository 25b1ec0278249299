#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "lfold/cli.hpp"
#include "lfold/errors.hpp"
#include "lfold/fold.hpp"
#include "lfold/modforms.hpp"
#include "lfold/ntkernel.hpp"
#include "lfold/quadforms.hpp"
#include "lfold/sigma.hpp"
#include "lfold/sums.hpp"

namespace lfold::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct FormArgs {
  std::int64_t D = -4;
  std::optional<std::int64_t> a, b, c;

  void attach(CLI::App* app, bool with_D = true) {
    if (with_D) app->add_option("-D,--discriminant", D, "negative discriminant");
    app->add_option("-a", a, "form coefficient a");
    app->add_option("-b", b, "form coefficient b");
    app->add_option("-c", c, "form coefficient c");
  }

  bool explicit_form() const { return a || b || c; }

  // The explicit form when given, else the principal form of D.
  qf::QuadraticForm form() const {
    if (explicit_form()) {
      if (!a || !b || !c) throw InputError("a form needs all of -a, -b and -c");
      return qf::QuadraticForm(*a, *b, *c);
    }
    return principal_form(D);
  }

  static qf::QuadraticForm principal_form(std::int64_t D) {
    if (D >= 0 || !nt::is_discriminant(D)) {
      throw InputError("D = " + std::to_string(D) + " is not a negative discriminant");
    }
    const std::int64_t b0 = D % 2 == 0 ? 0 : 1;
    return qf::QuadraticForm(1, b0, (b0 * b0 - D) / 4);
  }
};

struct TableArgs {
  int weight = 12;
  std::string in;

  void attach(CLI::App* app) {
    app->add_option("--weight,-k", weight, "weight of the level-1 eigenform");
    app->add_option("--in", in, "coefficient file to use instead of building");
  }
};

ordered_json form_json(const qf::QuadraticForm& q) { return {{"a", q.a()}, {"b", q.b()}, {"c", q.c()}}; }

std::vector<std::uint64_t> parse_grid(const std::string& text) {
  std::vector<std::uint64_t> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size() || v < 1 || v != std::floor(v)) throw std::invalid_argument(item);
      grid.push_back(static_cast<std::uint64_t>(v));
    } catch (const std::exception&) {
      throw InputError("bad grid entry '" + item + "'");
    }
  }
  if (grid.empty()) throw InputError("empty grid");
  return grid;
}

class Runner {
 public:
  Runner(Config& cfg, std::ostream& err) : cfg_(cfg), err_(err) {}

  mf::Eigenform acquire(const TableArgs& t, std::uint64_t upto) const {
    if (!t.in.empty()) return mf::load_eigenform(t.in);
    std::optional<fs::path> dir;
    if (cfg_.cache_dir) dir = fs::path(*cfg_.cache_dir);
    return mf::cached_level_one_eigenform(t.weight, upto, dir);
  }

  Report start(const std::string& command) const {
    Report r;
    r.command = command;
    return r;
  }

  void finish(Report& r, std::optional<std::uint64_t> seed = std::nullopt) const {
    r.provenance["version"] = kToolVersion;
    r.provenance["engine_version"] = mf::kEngineVersion;
    r.provenance["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
    r.provenance["K"] = cfg_.truncation_K;
    r.provenance["h"] = cfg_.grid_step;
    r.provenance["threads"] = cfg_.threads();
  }

  Config& cfg_;
  std::ostream& err_;
};

void echo_inputs(const CLI::App* app, Report& r) {
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    std::string name = opt->get_name();
    const auto& res = opt->results();
    std::string joined;
    for (std::size_t i = 0; i < res.size(); ++i) joined += (i ? " " : "") + res[i];
    if (!opt->get_expected_min()) joined = "true";
    r.inputs[name] = joined;
  }
}

}  // namespace

void Config::validate() const {
  if (!(epsilon > 0)) throw InputError("epsilon must be positive");
  if (!(grid_step > 0) || grid_step > 1e-2) throw InputError("grid step must lie in (0, 1e-2]");
  if (truncation_K < 1) throw InputError("truncation K must be at least 1");
}

unsigned Config::threads() const {
  if (thread_count > 0) return thread_count;
  return std::max(1u, std::thread::hardware_concurrency());
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  if (const char* env = std::getenv("LFOLD_CACHE_DIR"); env != nullptr && *env != '\0') cfg.cache_dir = env;

  CLI::App app{"Exact and numerical tools for l-fold product coefficients over binary quadratic forms", "lfold"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  std::string format = "table";
  std::string cache_dir;
  bool timing = false;
  app.add_option("--format", format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
  app.add_option("--cache-dir", cache_dir, "coefficient cache directory (default LFOLD_CACHE_DIR)");
  app.add_option("--threads", cfg.thread_count, "worker threads, 0 = all cores");
  app.add_flag("--timing", timing, "print elapsed time on stderr");

  // eigenform
  auto* eig = app.add_subcommand("eigenform", "build, verify or export coefficient tables");
  eig->require_subcommand(1);
  int e_weight = cfg.default_weight;
  std::uint64_t e_upto = 1000;
  std::string e_out, e_in;
  bool e_normalized = false;
  auto* e_build = eig->add_subcommand("build", "build a level-1 eigenform and write its table");
  e_build->add_option("--weight,-k", e_weight);
  e_build->add_option("--upto", e_upto)->check(CLI::PositiveNumber);
  e_build->add_option("--out", e_out);
  auto* e_verify = eig->add_subcommand("verify", "re-verify a coefficient file");
  e_verify->add_option("--in", e_in)->required();
  auto* e_export = eig->add_subcommand("export", "export a, and optionally lambda, as CSV");
  e_export->add_option("--weight,-k", e_weight);
  e_export->add_option("--upto", e_upto)->check(CLI::PositiveNumber);
  e_export->add_option("--in", e_in);
  e_export->add_option("--out", e_out);
  e_export->add_flag("--normalized", e_normalized, "add the lambda column");

  // qform
  auto* qfc = app.add_subcommand("qform", "binary quadratic forms");
  qfc->require_subcommand(1);
  FormArgs q_form;
  std::uint64_t q_upto = 100;
  auto* q_reduce = qfc->add_subcommand("reduce", "reduce a form");
  q_form.attach(q_reduce, false);
  auto* q_class = qfc->add_subcommand("class", "list the reduced forms of discriminant D");
  q_class->add_option("-D,--discriminant", q_form.D)->required();
  auto* q_rep = qfc->add_subcommand("represent", "representation counts r_Q(n)");
  q_form.attach(q_rep);
  q_rep->add_option("--upto", q_upto)->check(CLI::PositiveNumber);
  auto* q_check = qfc->add_subcommand("check-formula", "check r_Q(n) = w_D r*(n)");
  q_form.attach(q_check);
  q_check->add_option("--upto", q_upto)->check(CLI::PositiveNumber);

  // constants / cheb / verify-fold
  unsigned ell = 3;
  auto* consts = app.add_subcommand("constants", "the constants A and B");
  consts->add_option("--ell,-l", ell)->required();
  auto* cheb = app.add_subcommand("cheb", "Chebyshev decomposition of x^ell");
  cheb->add_option("--ell,-l", ell)->required();
  TableArgs vf_table;
  std::uint64_t vf_pmax = 1000;
  std::int64_t vf_D = -4;
  auto* vfold = app.add_subcommand("verify-fold", "prime-level fold identities for all p <= pmax");
  vfold->add_option("--ell,-l", ell);
  vf_table.attach(vfold);
  vfold->add_option("--pmax", vf_pmax)->check(CLI::PositiveNumber);
  vfold->add_option("-D,--discriminant", vf_D);

  // sum
  TableArgs s_table;
  FormArgs s_form;
  std::uint64_t s_upto = 1000;
  std::string s_grid, s_mode = "SQ", s_variant = "statement";
  auto* sum = app.add_subcommand("sum", "summatory functions S_ell(f, Q; X)");
  sum->add_option("--ell,-l", ell);
  s_table.attach(sum);
  s_form.attach(sum);
  sum->add_option("--upto,-X", s_upto)->check(CLI::PositiveNumber);
  sum->add_option("--grid", s_grid, "comma-separated X values for a bound-ratio sweep");
  sum->add_option("--mode", s_mode)->check(CLI::IsMember({"SQ", "SD", "rstar"}));
  sum->add_option("--epsilon", cfg.epsilon);
  sum->add_option("--variant", s_variant)->check(CLI::IsMember({"statement", "proof"}));

  // signchange
  TableArgs sc_table;
  FormArgs sc_form;
  std::string sc_mode = "I";
  std::uint64_t sc_limit = 1000;
  auto* signc = app.add_subcommand("signchange", "first sign change with exact witness");
  signc->add_option("--ell,-l", ell);
  sc_table.attach(signc);
  sc_form.attach(signc);
  signc->add_option("--mode", sc_mode)->check(CLI::IsMember({"I", "Q", "D"}));
  signc->add_option("--limit", sc_limit)->check(CLI::PositiveNumber);

  // bounds
  sums::BoundInputs b_in;
  std::string b_thm = "1.1", b_variant = "statement";
  auto* bounds = app.add_subcommand("bounds", "bound evaluators in log space");
  bounds->add_option("--thm", b_thm)->check(CLI::IsMember({"1.1", "1.2"}));
  bounds->add_option("--ell,-l", b_in.ell);
  bounds->add_option("--weight,-k", b_in.k);
  bounds->add_option("--level,-N", b_in.N);
  bounds->add_option("-D,--discriminant", b_in.D);
  bounds->add_option("-X", b_in.X);
  bounds->add_option("--u0", b_in.u0);
  bounds->add_option("--epsilon", cfg.epsilon);
  bounds->add_option("--variant", b_variant)->check(CLI::IsMember({"statement", "proof"}));

  // lowerbound
  std::int64_t lb_D = -4;
  std::uint64_t lb_N = 1;
  double lb_Y = 100, lb_u = 1;
  std::uint64_t lb_cutoff = 1000000;
  auto* lower = app.add_subcommand("lowerbound", "h_Y-weighted sum against its main term");
  lower->add_option("-D,--discriminant", lb_D);
  lower->add_option("--level,-N", lb_N);
  lower->add_option("--ell,-l", ell);
  lower->add_option("--Y", lb_Y);
  lower->add_option("--u", lb_u);
  lower->add_option("--K", cfg.truncation_K);
  lower->add_option("--step", cfg.grid_step);
  lower->add_option("--cutoff", lb_cutoff);

  // sigma
  double sg_U = 3.0, sg_table_step = 0.01, sg_mc_u = 1.0;
  bool sg_find = false, sg_table = false, sg_residual = false;
  unsigned sg_mc_j = 0;
  std::uint64_t sg_samples = 1000000;
  auto* sig = app.add_subcommand("sigma", "solve the delay equation for sigma(u)");
  sig->add_option("--ell,-l", ell);
  sig->add_option("--K", cfg.truncation_K);
  sig->add_option("--step", cfg.grid_step);
  sig->add_option("--U", sg_U);
  sig->add_flag("--find-u0", sg_find);
  sig->add_flag("--table", sg_table);
  sig->add_option("--table-step", sg_table_step, "spacing of table rows");
  sig->add_flag("--residual", sg_residual, "add integral-equation residuals to the table");
  sig->add_option("--mc-j", sg_mc_j, "Monte-Carlo estimate of I_j (j = 1 or 2)");
  sig->add_option("--mc-u", sg_mc_u);
  sig->add_option("--samples", sg_samples);
  sig->add_option("--seed", cfg.seed);

  // eeta
  std::int64_t ee_D = -4;
  std::uint64_t ee_N = 1, ee_X = 1000000, ee_cutoff = 1000000;
  double ee_eta = 2;
  auto* eeta = app.add_subcommand("eeta", "E_eta(X) against its main term");
  eeta->add_option("-D,--discriminant", ee_D);
  eeta->add_option("--level,-N", ee_N);
  eeta->add_option("--eta", ee_eta);
  eeta->add_option("-X", ee_X)->check(CLI::PositiveNumber);
  eeta->add_option("--cutoff", ee_cutoff);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  Runner run(cfg, err);
  Report r;
  try {
    cfg.output_format = parse_format(format);
    if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
    cfg.validate();
    std::string echo;
    for (std::size_t i = 1; i < args.size(); ++i) echo += (i > 1 ? " " : "") + args[i];
    std::optional<std::uint64_t> seed;
    const CLI::App* leaf = nullptr;

    if (eig->parsed()) {
      if (e_build->parsed()) {
        leaf = e_build;
        r = run.start("eigenform build");
        const mf::Eigenform f = mf::build_level_one_eigenform(e_weight, e_upto);
        const mf::IntegrityReport integ = mf::verify_integrity(f, f.x_max());
        if (!e_out.empty()) mf::save_eigenform(f, e_out);
        r.result["label"] = f.label();
        r.result["weight"] = f.weight();
        r.result["level"] = f.level();
        r.result["count"] = f.x_max();
        if (f.x_max() >= 2) r.result["a_2"] = f.a(2).get_str();
        r.result["integrity"] = integ.pass ? "pass" : "fail: " + integ.failure;
        if (!e_out.empty()) r.result["written"] = e_out;
        r.exit_code = integ.pass ? 0 : 1;
      } else if (e_verify->parsed()) {
        leaf = e_verify;
        r = run.start("eigenform verify");
        try {
          const mf::Eigenform f = mf::load_eigenform(e_in);
          const mf::DeligneReport del = mf::verify_deligne(f, f.x_max());
          r.result["label"] = f.label();
          r.result["weight"] = f.weight();
          r.result["level"] = f.level();
          r.result["checked_upto"] = f.x_max();
          r.result["deligne_violations"] = del.violations.size();
          r.result["status"] = "pass";
        } catch (const InvariantViolation& e) {
          r.result["status"] = "fail";
          r.result["failure"] = e.what();
          if (e.failing_pair()) {
            r.result["failing_m"] = e.failing_pair()->first;
            r.result["failing_n"] = e.failing_pair()->second;
          }
          r.exit_code = 1;
        }
      } else {
        leaf = e_export;
        r = run.start("eigenform export");
        const mf::Eigenform f = e_in.empty() ? run.acquire({e_weight, ""}, e_upto) : mf::load_eigenform(e_in);
        const std::uint64_t upto = e_in.empty() ? e_upto : f.x_max();
        std::ostringstream body;
        body << (e_normalized ? "n,a,lambda\n" : "n,a\n");
        for (std::uint64_t n = 1; n <= upto; ++n) {
          body << n << "," << f.a(n).get_str();
          if (e_normalized) body << "," << ordered_json(mf::normalized_lambda(f, n).value).dump();
          body << "\n";
        }
        if (e_out.empty()) {
          out << body.str();
          return 0;
        }
        std::ofstream file(e_out);
        if (!file) throw InputError("cannot write " + e_out);
        file << body.str();
        r.result["label"] = f.label();
        r.result["rows"] = upto;
        r.result["written"] = e_out;
      }
    } else if (qfc->parsed()) {
      if (q_reduce->parsed()) {
        leaf = q_reduce;
        r = run.start("qform reduce");
        if (!q_form.explicit_form()) throw InputError("qform reduce needs -a, -b and -c");
        const qf::QuadraticForm q = q_form.form();
        const qf::QuadraticForm red = qf::reduce(q);
        r.result["input"] = q.to_string();
        r.result["discriminant"] = q.discriminant();
        r.result["reduced"] = red.to_string();
        r.result["was_reduced"] = q.is_reduced();
      } else if (q_class->parsed()) {
        leaf = q_class;
        r = run.start("qform class");
        if (q_form.D >= 0) throw InputError("D must be negative");
        const qf::ClassSet cls = qf::class_set(q_form.D);
        r.result["D"] = cls.D;
        r.result["h"] = cls.h;
        r.result["w"] = cls.w;
        r.result["fundamental"] = nt::is_fundamental_discriminant(cls.D);
        for (const auto& q : cls.forms) r.rows.push_back(form_json(q));
      } else if (q_rep->parsed()) {
        leaf = q_rep;
        r = run.start("qform represent");
        const qf::QuadraticForm q = q_form.form();
        const auto counts = qf::representation_counts(q, q_upto, cfg.threads());
        r.result["form"] = q.to_string();
        r.result["D"] = q.discriminant();
        for (std::uint64_t n = 1; n <= q_upto; ++n) r.rows.push_back({{"n", n}, {"r", counts[n]}});
      } else {
        leaf = q_check;
        r = run.start("qform check-formula");
        const qf::QuadraticForm q = q_form.form();
        const qf::RepFormulaReport rep = qf::verify_rep_formula(q, q_upto);
        r.result["form"] = q.to_string();
        r.result["D"] = q.discriminant();
        r.result["h"] = rep.h;
        r.result["w"] = rep.w;
        r.result["checked_upto"] = rep.checked_upto;
        r.result["status"] = qf::to_string(rep.status);
        if (rep.status == qf::FormulaStatus::Fail) {
          r.result["first_failure"] = rep.first_failure;
          r.result["lattice_count"] = rep.lattice_count;
          r.result["formula_value"] = rep.formula_value;
          r.exit_code = 1;
        }
      }
    } else if (consts->parsed()) {
      leaf = consts;
      r = run.start("constants");
      if (ell < 3 || ell % 2 == 0) throw InputError("constants needs odd ell >= 3");
      const fold::FoldConstants c = fold::fold_constants(ell);
      r.result["ell"] = ell;
      r.result["A"] = c.A.get_str();
      r.result["B"] = c.B.get_str();
      r.result["binomial_identity"] = fold::binomial_identity_check(ell) ? "PASS" : "FAIL";
      if (!fold::binomial_identity_check(ell)) r.exit_code = 1;
    } else if (cheb->parsed()) {
      leaf = cheb;
      r = run.start("cheb");
      if (ell < 1) throw InputError("cheb needs ell >= 1");
      const fold::ChebyshevDecomposition dec = fold::cheb_decomposition(ell);
      r.result["ell"] = ell;
      r.result["identity"] = fold::cheb_identity_residual(dec).empty() ? "PASS" : "FAIL";
      for (unsigned j = 0; j <= ell; ++j) {
        if (sgn(dec.coeffs[j]) == 0) continue;
        r.rows.push_back({{"j", j},
                          {"A", dec.coeffs[j].get_str()},
                          {"T", "T_" + std::to_string(j)},
                          {"polynomial", fold::to_string(fold::chebyshev_T(j))}});
      }
    } else if (vfold->parsed()) {
      leaf = vfold;
      r = run.start("verify-fold");
      if (ell < 1 || ell % 2 == 0) throw InputError("verify-fold needs odd ell");
      const mf::Eigenform f = run.acquire(vf_table, std::max<std::uint64_t>(vf_pmax, 2));
      std::uint64_t checked = 0;
      std::optional<std::uint64_t> fcrel_fail, decomp_fail;
      for (const std::uint64_t p : nt::sieve_primes(vf_pmax)) {
        if (f.level() % p == 0) continue;
        ++checked;
        if (!fcrel_fail && !fold::verify_fcrel(f, ell, p).pass) fcrel_fail = p;
        if (!decomp_fail && !fold::verify_decomposition_prime(f, vf_D, ell, p).pass) decomp_fail = p;
      }
      r.result["label"] = f.label();
      r.result["ell"] = ell;
      r.result["primes_checked"] = checked;
      r.result["fcrel"] = fcrel_fail ? "FAIL at p = " + std::to_string(*fcrel_fail) : "PASS";
      r.result["decomposition"] = decomp_fail ? "FAIL at p = " + std::to_string(*decomp_fail) : "PASS";
      if (fcrel_fail || decomp_fail) r.exit_code = 1;
    } else if (sum->parsed()) {
      leaf = sum;
      r = run.start("sum");
      if (ell % 2 == 0) throw InputError("sum needs odd ell");
      if (!s_grid.empty()) {
        const auto grid = parse_grid(s_grid);
        const mf::Eigenform f = run.acquire(s_table, grid.back());
        const qf::QuadraticForm q = s_form.form();
        const auto variant = s_variant == "proof" ? sums::ExponentVariant::Proof : sums::ExponentVariant::Statement;
        const sums::SumReport rep = sums::bound_ratio_sweep(f, q, ell, grid, cfg.epsilon, variant, cfg.threads());
        r.result["form"] = q.to_string();
        r.result["ell"] = ell;
        r.result["epsilon"] = cfg.epsilon;
        r.result["exponent"] = sums::to_string(rep.variant);
        r.result["max_ratio"] = rep.max_ratio;
        r.result["trend"] = rep.trend;
        for (std::size_t i = 0; i < grid.size(); ++i) {
          r.rows.push_back({{"X", grid[i]},
                            {"S", rep.S_values[i]},
                            {"log_bound", rep.bound_values[i]},
                            {"ratio", rep.ratios[i]},
                            {"running_max", rep.running_max[i]}});
        }
      } else {
        const mf::Eigenform f = run.acquire(s_table, s_upto);
        r.result["ell"] = ell;
        r.result["X"] = s_upto;
        if (s_mode == "SQ") {
          const qf::QuadraticForm q = s_form.form();
          r.result["form"] = q.to_string();
          r.result["S"] = sums::summatory_SQ(f, q, ell, s_upto, cfg.threads());
        } else if (s_mode == "SD") {
          r.result["D"] = s_form.D;
          r.result["S_D"] = sums::summatory_SD(f, s_form.D, ell, s_upto, cfg.threads());
        } else {
          r.result["D"] = s_form.D;
          r.result["S_rstar"] = sums::summatory_rstar(f, s_form.D, ell, s_upto);
        }
        r.result["mode"] = s_mode;
      }
    } else if (signc->parsed()) {
      leaf = signc;
      r = run.start("signchange");
      const mf::Eigenform f = run.acquire(sc_table, sc_limit);
      const sums::SignMode mode =
          sc_mode == "Q" ? sums::SignMode::Q : (sc_mode == "D" ? sums::SignMode::D : sums::SignMode::I);
      std::optional<qf::QuadraticForm> form;
      if (mode == sums::SignMode::Q) form = sc_form.form();
      if (mode == sums::SignMode::D && (sc_form.D >= 0 || !nt::is_discriminant(sc_form.D))) {
        throw InputError("D must be a negative discriminant");
      }
      const sums::SignChangeResult res = sums::first_sign_change(f, ell, mode, form, sc_form.D, sc_limit);
      r.result["mode"] = sums::to_string(res.mode);
      r.result["ell"] = ell;
      r.result["search_limit"] = res.search_limit;
      r.result["found"] = res.found;
      if (res.found) {
        r.result["n"] = res.n_star;
        r.result["witness_a"] = res.witness_a.get_str();
        if (res.witness_form) r.result["witness_form"] = res.witness_form->to_string();
        if (res.witness_point) {
          r.result["witness_x"] = res.witness_point->first;
          r.result["witness_y"] = res.witness_point->second;
        }
      } else {
        r.result["n"] = "none found <= " + std::to_string(res.search_limit);
      }
    } else if (bounds->parsed()) {
      leaf = bounds;
      r = run.start("bounds");
      b_in.epsilon = cfg.epsilon;
      b_in.variant = b_variant == "proof" ? sums::ExponentVariant::Proof : sums::ExponentVariant::Statement;
      r.result["theorem"] = b_thm;
      if (b_thm == "1.1") {
        const double lv = sums::thm11_log_bound(b_in);
        r.result["exponent"] = sums::to_string(b_in.variant);
        r.result["log_value"] = lv;
        r.result["value"] = std::exp(lv);
      } else {
        const sums::Thm12Bound tb = sums::thm12_bound(b_in);
        r.result["u0"] = b_in.u0;
        r.result["log_value"] = tb.log_value;
        r.result["value"] = std::exp(tb.log_value);
        r.result["h"] = tb.h;
        r.result["log_value_class_number"] = tb.log_value_class_number;
      }
    } else if (lower->parsed()) {
      leaf = lower;
      r = run.start("lowerbound");
      cfg.validate();
      sums::LowerBoundOptions opt;
      opt.K = cfg.truncation_K;
      opt.h = cfg.grid_step;
      opt.prime_cutoff = lb_cutoff;
      const sums::LowerBoundReport lb = sums::lowerbound_lhs(lb_D, lb_N, ell, lb_Y, lb_u, opt);
      r.result["limit"] = lb.limit;
      r.result["lhs"] = lb.lhs;
      r.result["sigma_u"] = lb.sigma_u;
      r.result["beta0"] = lb.beta0;
      r.result["P1"] = lb.P1;
      r.result["L1"] = lb.L1;
      r.result["main_term_log_Yu"] = lb.main_term_log_Yu;
      r.result["main_term_log_Y"] = lb.main_term_log_Y;
      r.result["ratio_log_Yu"] = lb.ratio_log_Yu;
      r.result["ratio_log_Y"] = lb.ratio_log_Y;
    } else if (sig->parsed()) {
      leaf = sig;
      r = run.start("sigma");
      const sigma::StepFunction beta = sigma::pow_step(sigma::alpha_step(cfg.truncation_K), ell);
      const sigma::SigmaSolution sol = sigma::solve_sigma_for(ell, cfg.truncation_K, sg_U, cfg.grid_step);
      r.result["ell"] = ell;
      r.result["beta0"] = sol.beta0;
      r.result["x1"] = sol.x1;
      r.result["U"] = sol.U;
      if (sg_find || (!sg_table && sg_mc_j == 0)) {
        const sigma::U0Result u0 = sigma::find_u0(sol);
        r.result["u0"] = u0.u0;
        r.result["u0_status"] = u0.status;
      }
      if (sg_table) {
        if (!(sg_table_step > 0)) throw InputError("table step must be positive");
        const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sg_table_step / sol.h)));
        for (std::size_t i = stride; i < sol.sigma.size(); i += stride) {
          ordered_json row = {{"u", sol.u(i)}, {"sigma", sol.sigma[i]}};
          if (sg_residual) row["residual"] = sigma::residual_integral_eq(sol, beta, sol.u(i));
          r.rows.push_back(row);
        }
      }
      if (sg_mc_j != 0) {
        const sigma::MonteCarloResult mc =
            sigma::I_j_montecarlo(beta, sg_mc_u, sg_mc_j, sg_samples, cfg.seed, cfg.threads());
        r.result["mc_j"] = sg_mc_j;
        r.result["mc_u"] = sg_mc_u;
        r.result["mc_value"] = mc.value;
        r.result["mc_std_error"] = mc.std_error;
        r.result["mc_samples"] = mc.samples;
        seed = cfg.seed;
      }
    } else if (eeta->parsed()) {
      leaf = eeta;
      r = run.start("eeta");
      const sums::EetaResult e = sums::E_eta(ee_D, ee_N, ee_eta, ee_X);
      r.result["E_primitive"] = e.primitive;
      r.result["E_lattice"] = e.lattice;
      r.result["w"] = e.w;
      if (ee_X >= 3) {
        const sums::MainTermE m = sums::main_term_E(ee_D, ee_N, ee_eta, static_cast<double>(ee_X), ee_cutoff);
        r.result["P1"] = m.P1;
        r.result["L1"] = m.L1;
        r.result["main"] = m.main;
        r.result["error_envelope"] = m.error_envelope;
        r.result["ratio"] = e.primitive / m.main;
      }
    }
    if (leaf != nullptr) echo_inputs(leaf, r);
    r.inputs["argv"] = echo;
    run.finish(r, seed);
    out << render(r, cfg.output_format);
  } catch (const InvariantViolation& e) {
    err << "verification failure: " << e.what() << "\n";
    return 1;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (timing) {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    err << "elapsed: " << ms << " ms\n";
  }
  return r.exit_code;
}

}  // namespace lfold::cli
