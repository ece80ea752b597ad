#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>

#include "qw/dynamics.hpp"
#include "qw/io.hpp"
#include "qw/oscseries.hpp"
#include "qw/perturbation.hpp"
#include "qw/validate.hpp"

using namespace qw;
using nlohmann::json;

namespace {

// Exit codes.
constexpr int kOk = 0, kCriterion = 1, kUsage = 2;

struct Common {
  std::string s = "3/2", w = "1", r = "1/100000", beta = "1";
  int N = 1;
  std::string config;
  std::string out = ".";
  unsigned long long seed = 12345;
  unsigned precision = 0;  // 0: environment or 256
};

struct RunConfig {
  std::string command;
  ModelParams params;
  PhysicalConstants consts;
  unsigned precision_bits = 256;
  unsigned long long seed = 0;
  std::filesystem::path out;
  json inputs;
};

RunConfig resolve(const std::string& command, const Common& c, json extra) {
  json j = {{"s", c.s}, {"w", c.w}, {"N", c.N}, {"r", c.r}, {"beta", c.beta}};
  json consts_json = json::object();
  unsigned long long seed = c.seed;
  unsigned bits = c.precision ? c.precision : precision_bits_from_env(256);
  std::string out = c.out;
  if (!c.config.empty()) {
    json cfg;
    try {
      cfg = json::parse(read_file(c.config));
    } catch (const json::exception& e) {
      throw ValidationError("--config: " + std::string(e.what()));
    }
    for (const char* k : {"s", "w", "N", "r", "beta"})
      if (cfg.contains(k)) j[k] = cfg[k];
    if (cfg.contains("constants")) consts_json = cfg["constants"];
    if (cfg.contains("seed")) seed = cfg["seed"].get<unsigned long long>();
    if (cfg.contains("precision_bits")) bits = cfg["precision_bits"].get<unsigned>();
    if (cfg.contains("output_dir")) out = cfg["output_dir"].get<std::string>();
    if (cfg.contains(command) && cfg[command].is_object())
      for (auto& [k, v] : cfg[command].items()) extra[k] = v;
  }
  if (bits < 64) throw ValidationError("--precision-bits must be at least 64");
  set_precision_bits(bits);
  RunConfig rc;
  rc.command = command;
  rc.params = params_from_json(j);
  rc.consts = constants_from_json(consts_json);
  rc.precision_bits = bits;
  rc.seed = seed;
  rc.out = out;
  std::filesystem::create_directories(rc.out);
  rc.inputs = {{"params", to_json(rc.params)}, {"constants", to_json(rc.consts)}, {"options", extra}};
  return rc;
}

std::string f(double x) { return format_double(x); }
std::string f(const HiPrec& x) { return format_double(static_cast<double>(x)); }

struct Runner {
  RunConfig rc;
  std::vector<std::string> outputs;
  std::string path(const std::string& name) {
    outputs.push_back(name);
    return (rc.out / name).string();
  }
  void csv(const std::string& name, const CsvTable& t) { write_csv(path(name), t); }
  void json_file(const std::string& name, const json& j) { write_file_atomic(path(name), j.dump(2) + "\n"); }
};

using Action = std::function<int(Runner&)>;

std::vector<long> parse_long_list(const std::string& text, const char* flag) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      out.push_back(std::stol(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string(flag) + ": not an integer list: '" + text + "'");
    }
  }
  if (out.empty()) throw ValidationError(std::string(flag) + ": empty list");
  return out;
}

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help, Common& c) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--s", c.s, "half-odd s (rational)");
  sub->add_option("--w", c.w, "confinement w (rational, m^-2)");
  sub->add_option("--N", c.N, "light bodies per side");
  sub->add_option("--r", c.r, "mass ratio m/M (rational)");
  sub->add_option("--beta", c.beta, "inverse temperature in modified units (rational)");
  sub->add_option("--config", c.config, "JSON config; its values override flags");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--seed", c.seed, "master seed");
  sub->add_option("--precision-bits", c.precision, "MPFR precision (default QW_PRECISION_BITS or 256)");
  return sub;
}

// Per-command keys of the --config file become trailing options.
void append_config_options(std::vector<std::string>& args) {
  if (args.empty()) return;
  std::string config;
  for (size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") config = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
  if (config.empty()) return;
  json cfg;
  try {
    cfg = json::parse(read_file(config));
  } catch (const json::exception& e) {
    throw ValidationError("--config: " + std::string(e.what()));
  }
  const std::string& command = args[0];
  if (!cfg.contains(command) || !cfg[command].is_object()) return;
  for (auto& [k, v] : cfg[command].items()) {
    if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back("--" + k);
      continue;
    }
    args.push_back("--" + k);
    args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact heavy/light wavefunction model: spectra, elements, series, BML, perturbation, dynamics"};
  app.require_subcommand(1);
  // repeated options keep the last value, so config tokens appended below win
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  Common c;
  std::map<std::string, std::pair<CLI::App*, std::function<int(Runner&)>>> cmds;
  json opts;

  // spectrum
  long nmax = 10;
  auto* sp = add_command(app, "spectrum", "eigenvalues and polynomial coefficients", c);
  sp->add_option("--nmax", nmax, "highest excitation")->check(CLI::NonNegativeNumber);
  cmds["spectrum"] = {sp, [&](Runner& r) {
    CsvTable t{{"n", "mu_exact", "mu_float", "coeff_k", "coeff_value"}, {}};
    for (long n = 0; n <= nmax; ++n) {
      Rational mu = eigenvalue(n, r.rc.params);
      OneVarState st = eigenstate(n, r.rc.params);
      for (long k = 0; k <= n; ++k)
        t.rows.push_back({std::to_string(n), to_string(mu), f(to_double(mu)), std::to_string(k), to_string(st.poly[k])});
    }
    r.csv("spectrum.csv", t);
    return kOk;
  }};

  // oracle-eig
  int grid = 4000, keig = 4;
  double zmax = 8, tol_eig = 1e-3;
  auto* oe = add_command(app, "oracle-eig", "finite-difference spectrum against the exact one", c);
  oe->add_option("--grid", grid, "interior grid points")->check(CLI::Range(200, 2000000));
  oe->add_option("--k", keig, "eigenvalues to compare")->check(CLI::PositiveNumber);
  oe->add_option("--zmax", zmax, "right end in units of w^-1/2")->check(CLI::PositiveNumber);
  oe->add_option("--tolerance", tol_eig, "relative tolerance");
  cmds["oracle-eig"] = {oe, [&](Runner& r) {
    double w = to_double(r.rc.params.w);
    auto ev = fd_oracle_spectrum(r.rc.params, grid, 1e-9, zmax / std::sqrt(w), keig);
    CsvTable t{{"n", "fd", "exact", "rel_err"}, {}};
    bool ok = true;
    for (int n = 0; n < keig; ++n) {
      double ex = to_double(eigenvalue(n, r.rc.params));
      double rel = std::abs(ev[n] - ex) / ex;
      ok = ok && rel <= tol_eig;
      t.rows.push_back({std::to_string(n), f(ev[n]), f(ex), f(rel)});
    }
    r.csv("oracle_eig.csv", t);
    return ok ? kOk : kCriterion;
  }};

  // matelem
  std::string kernel = "z", method = "moment_algebra";
  long mu_ = 1, mv = 0;
  int digits = 30;
  auto* me = add_command(app, "matelem", "one-body matrix element", c);
  me->add_option("--kernel", kernel, "identity | z | z2 | z_inverse | d_dz");
  me->add_option("--u", mu_, "bra index")->check(CLI::NonNegativeNumber);
  me->add_option("--v", mv, "ket index")->check(CLI::NonNegativeNumber);
  me->add_option("--method", method, "moment_algebra | quadrature");
  me->add_option("--digits", digits, "quadrature target digits");
  cmds["matelem"] = {me, [&](Runner& r) {
    auto rep = matrix_element_report(parse_kernel(kernel), mu_, mv, r.rc.params, method, digits);
    CsvTable t{{"u", "v", "kernel", "value_float", "value_exact_string", "method"}, {}};
    t.rows.push_back({std::to_string(mu_), std::to_string(mv), kernel, f(rep.normalized), rep.raw_exact, rep.method});
    r.csv("matelem.csv", t);
    return kOk;
  }};

  // series
  std::string which = "s1", base = "2", s_or_t;
  long su = 20;
  auto* se = add_command(app, "series", "oscillating series, direct sum against integral form", c);
  se->add_option("--which", which, "s1 | s2 | s3");
  se->add_option("--u", su, "series length")->check(CLI::PositiveNumber);
  se->add_option("--t", s_or_t, "t for s3 (integer); defaults to s - 1/2");
  se->add_option("--base", base, "2 | e (s1, s2)");
  cmds["series"] = {se, [&](Runner& r) {
    SeriesKind k = parse_series_kind(which);
    Base b = parse_base(base);
    Rational arg = k == SeriesKind::S3 ? (s_or_t.empty() ? r.rc.params.s - Rational(1, 2) : parse_rational(s_or_t))
                                       : r.rc.params.s;
    double tol = k == SeriesKind::S3 ? 1e-6 : 1e-8;
    auto res = evaluate_series(k, su, arg, b, HiPrec(k == SeriesKind::S3 ? 1e-20 : 1e-30));
    auto res2 = evaluate_series(k, 2 * su, arg, b, HiPrec(k == SeriesKind::S3 ? 1e-20 : 1e-30));
    double slope = std::log(std::abs(static_cast<double>(res2.direct.value) / static_cast<double>(res.direct.value))) /
                   std::log(2.0);
    double rel = static_cast<double>(res.abs_diff / abs(res.direct.value));
    CsvTable t{{"which", "u", "t_or_s", "base", "direct", "integral", "abs_diff", "slope_window"}, {}};
    t.rows.push_back({which, std::to_string(su), to_string(arg), to_string(b), f(res.direct.value), f(res.integral),
                      f(res.abs_diff), f(slope)});
    r.csv("series.csv", t);
    return rel <= tol ? kOk : kCriterion;
  }};

  // bml
  std::string profile = "loglog", ulist = "100,1000,10000";
  double power = 2;
  auto* bm = add_command(app, "bml", "partial sums of the BML criterion over special states", c);
  bm->add_option("--profile", profile, "loglog | power");
  bm->add_option("--power", power, "exponent p for c_u = u^-p");
  bm->add_option("--U", ulist, "comma-separated partial-sum indices");
  cmds["bml"] = {bm, [&](Runner& r) {
    auto U = parse_long_list(ulist, "--U");
    long top = *std::max_element(U.begin(), U.end());
    auto basis = enumerate_basis(r.rc.params, top, BasisMode::special, static_cast<size_t>(top) + 1);
    EnsembleDraw d = profile == "power" ? power_law_ensemble(basis, power)
                                        : make_ensemble(basis, parse_profile(profile), 0, r.rc.seed, r.rc.params);
    CsvTable t{{"U", "partial_sum"}, {}};
    for (auto& ps : bml_partial_sums(d, r.rc.params, U)) t.rows.push_back({std::to_string(ps.U), f(ps.value)});
    r.csv("bml.csv", t);
    return kOk;
  }};

  // perturb
  long pn = 3, cutoff = 0, level = 0;
  double tail_tol = 1e-2;
  int corr_index = 0;
  auto* pe = add_command(app, "perturb", "K matrices, level splitting, first-order vector", c);
  pe->add_option("--nmax", pn, "highest level to split")->check(CLI::NonNegativeNumber);
  pe->add_option("--level", level, "level for the first-order vector")->check(CLI::NonNegativeNumber);
  pe->add_option("--index", corr_index, "correction index within the level");
  pe->add_option("--tail-tolerance", tail_tol, "largest outer-shell share of the first-order norm")
      ->check(CLI::PositiveNumber);
  pe->add_option("--cutoff", cutoff, "total-excitation cutoff for the first-order vector; 0 picks the largest <= 24 under the basis cap");
  cmds["perturb"] = {pe, [&](Runner& r) {
    CsvTable t{{"level_n", "m_n", "correction_index", "lambda1", "lhg_bound", "coarse_bound"}, {}};
    bool ok = true;
    ManyBodyOperators ops(r.rc.params, std::max(pn, 0L));
    for (long n = 0; n <= pn; ++n) {
      KMatrix k = build_k_matrix(n, ops);
      SplitLevel s = split_level(k, r.rc.params);
      for (size_t i = 0; i < s.corrections.size(); ++i) {
        double v = s.corrections[i];
        ok = ok && std::abs(v) <= s.lhg_bound * (1 + 1e-12) + 1e-12 && std::abs(v) <= s.coarse_bound * (1 + 1e-12) + 1e-12;
        t.rows.push_back({std::to_string(n), std::to_string(k.basis.size()), std::to_string(i), f(v), f(s.lhg_bound),
                          f(s.coarse_bound)});
      }
    }
    r.csv("splitting.csv", t);
    long cut = cutoff;
    if (cut <= 0) {
      cut = 24;
      while (cut > level + 1 && full_basis_count(r.rc.params.N, cut) > kDefaultBasisCap) --cut;
    }
    auto fo = first_order_vector(level, corr_index, r.rc.params, cut, tail_tol);
    CsvTable v{{"index", "total", "a"}, {}};
    for (size_t i = 0; i < fo.basis.size(); ++i)
      if (fo.a[i] != 0) v.rows.push_back({fo.basis[i].to_string(), std::to_string(fo.basis[i].total()), f(fo.a[i])});
    r.csv("first_order.csv", v);
    r.json_file("first_order.json", {{"level", level}, {"index", corr_index}, {"lambda1", fo.lambda1},
                                     {"norm", fo.norm}, {"tail_norm", fo.tail_norm}, {"cutoff", cut}});
    return ok ? kOk : kCriterion;
  }};

  // trajectory and diffusion share their inputs
  long tn = 2, steps = 2000, draws = 1;
  double dt = 0.01, tbeta = 1, T_obs = 0, nu_cutoff = 1e-3;
  std::string basis_mode = "full";
  auto traj_opts = [&](CLI::App* a) {
    a->add_option("--nmax", tn, "basis cutoff")->check(CLI::NonNegativeNumber);
    a->add_option("--basis", basis_mode, "special | full");
    a->add_option("--gibbs-beta", tbeta, "Gibbs inverse temperature (double, m^2)");
    a->add_option("--dt", dt, "time step (s)")->check(CLI::PositiveNumber);
    a->add_option("--steps", steps, "time samples")->check(CLI::Range(8L, 100000000L));
    a->add_option("--draws", draws, "ensemble draws")->check(CLI::PositiveNumber);
    a->add_option("--T", T_obs, "observation time for the fit (s); default half the span");
    a->add_option("--cutoff", nu_cutoff, "small-frequency cutoff on |nu| T (rad)");
  };
  struct TrajRun {
    std::vector<TrajectoryResult> runs;
    std::vector<double> ensemble;
  };
  auto run_traj = [&](Runner& r) {
    auto basis = enumerate_basis(r.rc.params, tn, parse_basis_mode(basis_mode));
    std::vector<double> t;
    for (long i = 0; i < steps; ++i) t.push_back(dt * i);
    TrajRun tr;
    for (long k = 0; k < draws; ++k) {
      auto d = make_ensemble(basis, Profile::gibbs_gaussian, tbeta, r.rc.seed, r.rc.params,
                             "ensemble/" + std::to_string(k));
      tr.runs.push_back(synthesize_trajectory(d, r.rc.params, r.rc.consts, t));
    }
    tr.ensemble.assign(tr.runs[0].msd.size(), 0.0);
    for (auto& run : tr.runs)
      for (size_t l = 0; l < run.msd.size(); ++l) tr.ensemble[l] += run.msd[l] / draws;
    return tr;
  };
  auto* tj = add_command(app, "trajectory", "synthesize X(t) from Gibbs draws and its MSD", c);
  traj_opts(tj);
  cmds["trajectory"] = {tj, [&](Runner& r) {
    TrajRun tr = run_traj(r);
    CsvTable x{{"t", "x"}, {}};
    for (size_t i = 0; i < tr.runs[0].times.size(); ++i) x.rows.push_back({f(tr.runs[0].times[i]), f(tr.runs[0].x[i])});
    r.csv("trajectory.csv", x);
    CsvTable m{{"lag", "msd_time_avg", "msd_ensemble"}, {}};
    for (size_t l = 0; l < tr.ensemble.size(); ++l)
      m.rows.push_back({f(tr.runs[0].lags[l]), f(tr.runs[0].msd[l]), f(tr.ensemble[l])});
    r.csv("msd.csv", m);
    return kOk;
  }};
  auto* df = add_command(app, "diffusion", "curvature criterion and D from the MSD fit", c);
  traj_opts(df);
  cmds["diffusion"] = {df, [&](Runner& r) {
    TrajRun tr = run_traj(r);
    double T = T_obs > 0 ? T_obs : tr.runs[0].lags.back();
    TrajectoryResult ens = tr.runs[0];
    ens.msd = tr.ensemble;
    DiffusionResult d = diffusion_analysis(ens, T);
    d.cutoff = nu_cutoff;
    r.json_file("diffusion.json", {{"D", d.D}, {"curvature", d.curvature}, {"criterion_met", d.criterion_met},
                                   {"T", d.T}, {"cutoff", d.cutoff}, {"mode", "empirical"}, {"draws", draws}});
    return kOk;
  }};

  // cats
  std::string nlist = "1,2,4,8";
  long cn = 2, cdraws = 200;
  double cbeta = 1, grainP = 1e-6, cT = 1, Ddiff = 0;
  auto* ca = add_command(app, "cats", "dispersion scaling in N and the cat-free comparison", c);
  ca->add_option("--N-list", nlist, "comma-separated N values");
  ca->add_option("--nmax", cn, "full-basis cutoff")->check(CLI::NonNegativeNumber);
  ca->add_option("--gibbs-beta", cbeta, "Gibbs inverse temperature (double, m^2)");
  ca->add_option("--draws", cdraws, "Monte Carlo draws")->check(CLI::PositiveNumber);
  ca->add_option("--P", grainP, "grain diameter (m)")->check(CLI::PositiveNumber);
  ca->add_option("--T", cT, "observation time (s)")->check(CLI::PositiveNumber);
  ca->add_option("--D-diff", Ddiff, "diffusion coefficient (m^2/s) for the visible-motion test");
  cmds["cats"] = {ca, [&](Runner& r) {
    std::vector<int> Ns;
    for (long n : parse_long_list(nlist, "--N-list")) Ns.push_back(static_cast<int>(n));
    auto sc = dispersion_scaling(r.rc.params, Ns, cn, cbeta, cdraws, r.rc.seed);
    CsvTable t{{"N", "beta", "dispersion", "Y", "fitted_exponent"}, {}};
    json verdicts = json::array();
    for (auto& rep : sc.reports) {
      t.rows.push_back({std::to_string(rep.N), f(rep.beta), f(rep.dispersion), f(rep.Y), f(sc.exponent)});
      CatVerdict v = cat_check(rep.dispersion, rep.Y, rep.N, Ddiff, grainP, cT);
      verdicts.push_back({{"N", rep.N}, {"cat_free", v.cat_free}, {"visible_motion", v.visible_motion},
                          {"joint", v.joint}, {"f_est", v.f_est}, {"g_est", v.g_est}, {"n2f_below_g", v.n2f_below_g}});
    }
    r.csv("dispersion.csv", t);
    r.json_file("cats.json", {{"fitted_exponent", sc.exponent}, {"verdicts", verdicts}});
    return kOk;
  }};

  // scenario
  double volume = 0, diameter = 0, grain_mass = 1e-7;
  std::string shape = "cube";
  auto* sc = add_command(app, "scenario", "N, r and rN for a droplet and a grain", c);
  sc->add_option("--volume", volume, "droplet volume (cm^3)");
  sc->add_option("--diameter", diameter, "droplet diameter (cm), used when --volume is absent");
  sc->add_option("--shape", shape, "cube | sphere for --diameter");
  sc->add_option("--grain-mass", grain_mass, "grain mass (g)")->check(CLI::PositiveNumber);
  cmds["scenario"] = {sc, [&](Runner& r) {
    double V = volume > 0 ? volume : droplet_volume_cm3(diameter > 0 ? diameter : 0.1, parse_droplet_shape(shape));
    Scenario s = scenario(V, grain_mass, r.rc.consts);
    json j = {{"volume_cm3", V}, {"grain_mass_g", grain_mass}, {"N", s.N}, {"r", s.r}, {"rN", s.rN},
              {"hbar_over_m", hbar_over_m(r.rc.consts)}};
    std::cout << j.dump(2) << "\n";
    r.json_file("scenario.json", j);
    return kOk;
  }};

  // baselines
  double visc = 1e-3, radius = 1e-7, bM = 1e-14, bgamma = 1e-9, trap = 0, btmax = 1e-3, phi = 1e-18, dens = 200,
         grav = 9.8;
  long bsteps = 200;
  auto* bl = add_command(app, "baselines", "Einstein D, Langevin MSD and Perrin profile", c);
  bl->add_option("--viscosity", visc, "Pa s")->check(CLI::PositiveNumber);
  bl->add_option("--radius", radius, "grain radius (m)")->check(CLI::PositiveNumber);
  bl->add_option("--M", bM, "grain mass (kg)")->check(CLI::PositiveNumber);
  bl->add_option("--gamma", bgamma, "friction (kg/s)")->check(CLI::PositiveNumber);
  bl->add_option("--trap-omega", trap, "trap frequency (rad/s); 0 for free");
  bl->add_option("--tmax", btmax, "last time (s)")->check(CLI::PositiveNumber);
  bl->add_option("--steps", bsteps, "samples")->check(CLI::PositiveNumber);
  bl->add_option("--phi", phi, "grain volume (m^3)")->check(CLI::PositiveNumber);
  bl->add_option("--density-excess", dens, "grain minus fluid density (kg/m^3)");
  bl->add_option("--g", grav, "gravity (m/s^2)")->check(CLI::PositiveNumber);
  cmds["baselines"] = {bl, [&](Runner& r) {
    std::vector<double> T, h;
    for (long i = 1; i <= bsteps; ++i) T.push_back(btmax * i / bsteps);
    auto free_msd = langevin_msd(r.rc.consts, bM, bgamma, 0, T);
    auto trap_msd = trap > 0 ? langevin_msd(r.rc.consts, bM, bgamma, trap, T) : std::vector<double>(T.size(), 0.0);
    CsvTable l{{"T", "msd_free", "msd_trapped"}, {}};
    for (size_t i = 0; i < T.size(); ++i) l.rows.push_back({f(T[i]), f(free_msd[i]), f(trap_msd[i])});
    r.csv("langevin.csv", l);
    double hh = perrin_half_height(r.rc.consts, phi, dens, grav);
    for (long i = 0; i <= bsteps; ++i) h.push_back(4 * hh * i / bsteps);
    auto prof = perrin_profile(r.rc.consts, phi, dens, grav, h, 1.0);
    CsvTable p{{"h", "n"}, {}};
    for (size_t i = 0; i < h.size(); ++i) p.rows.push_back({f(h[i]), f(prof[i])});
    r.csv("perrin.csv", p);
    r.json_file("baselines.json", {{"einstein_D", einstein_D(r.rc.consts, visc, radius)}, {"perrin_half_height", hh}});
    return kOk;
  }};

  // validate
  bool quick = false;
  auto* va = add_command(app, "validate", "run the invariant suite", c);
  va->add_flag("--quick", quick, "smaller sizes");
  cmds["validate"] = {va, [&](Runner& r) {
    ValidateOptions o;
    o.seed = r.rc.seed;
    o.quick = quick;
    auto res = run_invariant_suite(o);
    CsvTable t{{"module", "check", "status", "seconds", "detail"}, {}};
    int failures = 0;
    for (auto& x : res) {
      std::string status = x.informational ? (x.passed ? "INFO-HOLDS" : "INFO-FAILS") : (x.passed ? "PASS" : "FAIL");
      if (!x.informational && !x.passed) ++failures;
      std::cout << status << "  [" << x.module << "] " << x.name << ": " << x.detail << "\n";
      t.rows.push_back({x.module, x.name, status, f(x.seconds), x.detail});
    }
    std::cout << (failures ? std::to_string(failures) + " invariant(s) failed" : "all invariants hold") << "\n";
    r.csv("validate.csv", t);
    return failures ? kCriterion : kOk;
  }};

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    append_config_options(args);
  } catch (const std::exception& e) {
    std::cerr << "qw: " << e.what() << "\n";
    return kUsage;
  }
  std::reverse(args.begin(), args.end());  // CLI11 takes the vector form reversed
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  for (auto& [name, entry] : cmds) {
    if (!entry.first->parsed()) continue;
    auto t0 = std::chrono::steady_clock::now();
    Runner runner;
    json extra;
    for (const auto* opt : entry.first->get_options()) {
      if (opt->get_name() == "--help" || opt->count() == 0) continue;
      extra[opt->get_name()] = opt->as<std::string>();
    }
    try {
      runner.rc = resolve(name, c, extra);
    } catch (const std::exception& e) {
      std::cerr << "qw " << name << ": " << e.what() << "\n";
      return kUsage;
    }
    int code;
    try {
      code = entry.second(runner);
    } catch (const ValidationError& e) {
      std::cerr << "qw " << name << ": " << e.what() << "\n";
      code = kUsage;
    } catch (const std::exception& e) {
      std::cerr << "qw " << name << ": " << e.what() << "\n";
      code = kCriterion;
    }
    Manifest m;
    m.command = name;
    m.inputs = runner.rc.inputs;
    m.seed = runner.rc.seed;
    m.precision_bits = runner.rc.precision_bits;
    m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m.outputs = runner.outputs;
    m.exit_code = code;
    try {
      write_file_atomic((runner.rc.out / (name + "_manifest.json")).string(), to_json(m).dump(2) + "\n");
    } catch (const std::exception& e) {
      std::cerr << "qw " << name << ": " << e.what() << "\n";
      if (code == kOk) code = kCriterion;
    }
    return code;
  }
  return kUsage;
}
