#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include <boost/algorithm/string.hpp>

#include "mueg/acceptance/acceptance.hpp"
#include "mueg/cli/cli.hpp"
#include "mueg/constructor/constructor.hpp"
#include "mueg/constructor/ledger.hpp"
#include "mueg/errors.hpp"
#include "mueg/fields/field_io.hpp"
#include "mueg/fields/parallel.hpp"
#include "mueg/rdm/bounds.hpp"
#include "mueg/rdm/orbital_library.hpp"
#include "mueg/tiling/tiling.hpp"
#include "mueg/ueg/ueg.hpp"

namespace mueg {

namespace {

constexpr std::uint64_t default_seed = 20240611;

// Collects named pass/fail checks, extra output files and the context of the running step.
struct Job {
  const JobConfig& cfg;
  std::string command;
  std::uint64_t seed = default_seed;
  std::string step = "reading configuration";
  Report body;
  std::vector<std::pair<std::string, bool>> checks;
  std::vector<std::pair<std::string, std::string>> files;
  std::string console;
  std::vector<std::string> warnings;

  void check(const std::string& name, bool ok) { checks.emplace_back(name, ok); }
  bool pass() const {
    for (const auto& c : checks)
      if (!c.second) return false;
    return true;
  }
};

ConstructorSpec read_spec(const JobConfig& cfg, const std::string& s) {
  ConstructorSpec spec;
  const std::string width = cfg.get_choice(s + ".width", "pointwise", {"pointwise", "constant"});
  spec.width = width == "pointwise" ? WidthPolicy::pointwise : WidthPolicy::constant;
  spec.delta = cfg.get_double(s + ".delta", spec.delta);
  spec.delta_floor = cfg.get_double(s + ".delta_floor", spec.delta_floor);
  spec.epsilon = cfg.get_double(s + ".epsilon", spec.epsilon);
  spec.t_order = cfg.get_int(s + ".t_order", spec.t_order);
  spec.u_order = cfg.get_int(s + ".u_order", spec.u_order);
  spec.convergence_tol = cfg.get_double(s + ".convergence_tol", spec.convergence_tol);
  return spec;
}

void construct_job(Job& job) {
  const JobConfig& cfg = job.cfg;
  const std::string rho_path = cfg.get_path("construct.rho");
  const std::string w_path = cfg.has("construct.w") ? cfg.get_path("construct.w") : "";
  const std::string g_path = cfg.has("construct.g") ? cfg.get_path("construct.g") : "";
  const ConstructorSpec spec = read_spec(cfg, "construct");
  const double marginal_tol = cfg.get_double("construct.marginal_tol", 1e-6);
  const double path_tol = cfg.get_double("construct.path_tol", 1e-4);
  const bool dump = cfg.get_bool("construct.dump_kernel", false);
  const int margin = cfg.get_int("construct.margin", 3);
  const bool has_anchor = cfg.has("construct.anchor");
  const Vec3 anchor_cfg = cfg.get_vec3("construct.anchor", Vec3::Zero());
  cfg.check_unused({"job", "construct"});
  if (margin < 0) throw DomainError("construct.margin must be nonnegative");

  job.step = "reading " + rho_path;
  const ScalarField rho = to_scalar_field(read_field_file(rho_path));
  VectorField w(rho.grid());
  if (!w_path.empty()) {
    job.step = "reading " + w_path;
    w = to_vector_field(read_field_file(w_path));
  }
  std::optional<ScalarField> g;
  if (!g_path.empty()) {
    job.step = "reading " + g_path;
    g = to_scalar_field(read_field_file(g_path));
  }

  job.step = "building the density matrix";
  const ConstructedRdmPtr gamma = build_rdm(rho, w, g ? &*g : nullptr, spec);
  // Checks run on the input grid without `margin` nodes per side, where the interpolated inputs
  // have full stencils.
  GridSpec grid = rho.grid();
  for (int a = 0; a < grid.dim; ++a) {
    if (grid.counts[a] <= 2 * margin + 1) throw DomainError("construct.margin leaves no interior grid points");
    grid.origin[a] += margin * grid.spacing[a];
    grid.counts[a] -= 2 * margin;
  }
  job.body.section("evaluation_grid");
  job.body.add("margin", margin);
  job.body.add("points", grid.size());

  job.step = "checking marginals";
  const MarginalReport m = verify_marginals(*gamma, grid, marginal_tol);
  job.body.section("marginals");
  job.body.append(m.to_report());
  job.check("marginals", m.pass);

  job.step = "evaluating the kinetic bound";
  const KineticBoundLedger ledger = kinetic_bound_ledger(*gamma, grid, path_tol);
  job.body.section("kinetic_bound");
  job.body.append(ledger.to_report());
  job.check("kinetic_bound", ledger.pass);

  if (dump) {
    job.step = "sampling the kernel";
    const Vec3 anchor = has_anchor ? anchor_cfg : Vec3(0.5 * (rho.grid().lower() + rho.grid().upper()));
    const ComplexScalarField k = sample_complex(rho.grid(), [&](const Vec3& x) { return gamma->kernel(x, anchor); });
    std::ostringstream os;
    write_field(os, k);
    job.files.emplace_back("kernel.field", os.str());
    job.body.section("kernel_dump");
    job.body.add("file", "kernel.field");
    job.body.add("anchor", format_double(anchor(0)) + " " + format_double(anchor(1)) + " " + format_double(anchor(2)));
  }
}

std::vector<std::string> split_paths(const std::string& s) {
  std::vector<std::string> parts;
  boost::split(parts, s, boost::is_any_of(","));
  std::vector<std::string> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

void verify_job(Job& job) {
  const JobConfig& cfg = job.cfg;
  const std::string suite = cfg.get_choice("verify.suite", "all", {"pointwise", "integrated", "all"});
  const int states = cfg.get_int("verify.states", 100);
  const int max_orbitals = cfg.get_int("verify.max_orbitals", 5);
  PointwiseOptions pw;
  pw.tolerance = cfg.get_double("verify.tolerance", pw.tolerance);
  const double itol = cfg.get_double("verify.integrated_tolerance", 1e-8);
  if (cfg.get_choice("verify.route", "tensor", {"tensor", "stencil"}) == "stencil") pw.route = VorticityRoute::stencil;
  const bool strict = cfg.get_bool("job.strict_vorticity", false);
  std::vector<std::string> orbital_paths;
  if (cfg.has("verify.orbitals"))
    for (const auto& p : split_paths(cfg.get_string("verify.orbitals", ""))) {
      std::filesystem::path fp(p);
      if (fp.is_relative()) fp = std::filesystem::path(cfg.base_dir()) / fp;
      if (!std::filesystem::is_regular_file(fp)) throw DomainError("verify.orbitals: no such file " + fp.string());
      orbital_paths.push_back(fp.string());
    }
  const std::vector<double> occupations = cfg.get_list("verify.occupations", {});
  cfg.check_unused({"job", "verify"});
  if (states < 1 || max_orbitals < 1) throw DomainError("verify: states and max_orbitals must be positive");

  std::shared_ptr<LowRankRdm> input;
  std::optional<GridSpec> grid;
  if (!orbital_paths.empty()) {
    std::vector<Orbital> orbitals;
    for (const auto& p : orbital_paths) {
      job.step = "reading " + p;
      const ComplexScalarField f = to_complex_scalar_field(read_field_file(p));
      if (grid && !(f.grid() == *grid)) throw DimensionError("orbital files must share a grid");
      grid = f.grid();
      orbitals.push_back(Orbital::from_field(f));
    }
    std::vector<double> occ = occupations.empty() ? std::vector<double>(orbitals.size(), 1.0) : occupations;
    if (occ.size() != orbitals.size()) throw DomainError("verify.occupations: one value per orbital required");
    input = std::make_shared<LowRankRdm>(orbitals, occ);
    job.body.section("input");
    job.body.add("orbitals", orbitals.size());
  } else {
    job.body.section("corpus");
    job.body.add("states", states);
    job.body.add("max_orbitals", max_orbitals);
  }

  double pw_min[2] = {1e300, 1e300}, int_min = 1e300;
  bool pw_pass = true, int_pass = true;
  const GridSpec g = grid ? *grid : corpus_grid();
  const int count = input ? 1 : states;
  for (int k = 0; k < count; ++k) {
    job.step = "state " + std::to_string(k);
    const auto gamma =
        input ? input : random_slater_state(job.seed + static_cast<std::uint64_t>(k), 1 + k % max_orbitals, g);
    const RdmObservables obs = gamma->observables(g);
    if (suite != "integrated") {
      const auto r = check_pointwise_bounds(obs, pw);
      for (int i = 0; i < 2; ++i) {
        pw_min[i] = std::min(pw_min[i], r[i].min_margin);
        pw_pass = pw_pass && r[i].pass;
      }
      if (k == 0) {
        job.body.section("pointwise_first_state");
        job.body.append(r[0].to_report());
        job.body.append(r[1].to_report());
      }
    }
    if (suite != "pointwise") {
      const BoundReport b = check_integrated_bound(obs, strict, itol, pw.route);
      int_min = std::min(int_min, b.min_margin);
      int_pass = int_pass && b.pass;
      if (k == 0) {
        job.body.section("integrated_first_state");
        job.body.append(b.to_report());
      }
    }
  }
  if (suite != "integrated") {
    job.body.section("pointwise");
    job.body.add("kinetic_inequality_min_margin", pw_min[0]);
    job.body.add("current_inequality_min_margin", pw_min[1]);
    job.body.add("tolerance", pw.tolerance);
    job.check("pointwise", pw_pass);
  }
  if (suite != "pointwise") {
    job.body.section("integrated");
    job.body.add("strict", strict);
    job.body.add("min_margin", int_min);
    job.body.add("tolerance", itol);
    job.check("integrated", int_pass);
  }
}

void tile_job(Job& job) {
  const JobConfig& cfg = job.cfg;
  const double l = cfg.get_double("tile.l", 1.0);
  const double delta = cfg.get_double("tile.delta", 0.1);
  const DomainKind target_kind = parse_domain_kind(cfg.get_choice("tile.target", "tetra", {"tetra", "tetrahedron", "box", "cube"}));
  const double target_scale = cfg.get_double("tile.target_scale", 12.0);
  const double delta_target = cfg.get_double("tile.delta_target", 0.4);
  const auto mc_samples = static_cast<std::size_t>(cfg.get_uint("tile.mc_samples", 200000));
  const int pou_points = cfg.get_int("tile.pou_points", 2000);
  const int average_points = cfg.get_int("tile.average_points", 4);
  const double pou_tol = cfg.get_double("tile.pou_tol", 1e-8);
  const bool off = cfg.get_bool("tile.off", false);
  cfg.check_unused({"job", "tile"});
  if (!(l > 0.0) || !(delta > 0.0) || pou_points < 0 || average_points < 0)
    throw DomainError("tile: l and delta must be positive, point counts nonnegative");

  const TetraDecomposition dec;
  job.body.append(decomposition_report(dec));

  job.step = "classifying tetrahedra";
  const IndexClassification cls = classify_indices(ueg_domain(target_kind, target_scale), dec, l, delta, delta_target);
  job.body.section("classification");
  job.body.add("target", to_string(target_kind));
  job.body.add("target_scale", target_scale);
  job.body.append(cls.to_report());

  job.step = "partition of unity";
  std::mt19937_64 rng(job.seed);
  std::uniform_real_distribution<double> u(-2.0 * l, 2.0 * l);
  int off_face = 0, not_one = 0;
  double worst_sum = 0.0;
  for (int k = 0; k < pou_points; ++k) {
    const IndicatorSum s = pou_indicator_sum(Vec3(u(rng), u(rng), u(rng)), dec, l);
    if (s.on_face) continue;
    ++off_face;
    worst_sum = std::max(worst_sum, std::abs(s.value - 1.0));
    if (s.value != 1.0) ++not_one;
  }
  double worst_avg = 0.0, mean_avg = 0.0;
  for (int k = 0; k < average_points; ++k) {
    const double r = std::abs(pou_regularized_average(Vec3(u(rng), u(rng), u(rng)), dec, l, delta).value - 1.0);
    worst_avg = std::max(worst_avg, r);
    mean_avg += r / average_points;
  }
  job.body.section("partition_of_unity");
  job.body.add("indicator_points", pou_points);
  job.body.add("indicator_points_off_faces", off_face);
  job.body.add("indicator_max_residual", worst_sum);
  job.body.add("regularized_points", average_points);
  job.body.add("regularized_max_residual", worst_avg);
  job.body.add("regularized_mean_residual", mean_avg);
  job.body.add("tolerance", pou_tol);
  job.check("indicator_sum", not_one == 0);
  job.check("regularized_average", worst_avg <= pou_tol);

  if (mc_samples > 0) {
    job.step = "Monte-Carlo tiling check";
    const TilingMonteCarlo mc = tiling_monte_carlo(dec, mc_samples, job.seed);
    job.body.section("monte_carlo");
    job.body.append(mc.to_report());
    job.check("monte_carlo", mc.pass);
  }

  if (off) {
    std::ostringstream os;
    write_off(os, dec, l);
    job.files.emplace_back("tiling.off", os.str());
  }
}

void ueg_scan_job(Job& job) {
  const JobConfig& cfg = job.cfg;
  const double rho0 = cfg.get_double("ueg-scan.rho0", 1.0);
  const Vec3 nu0 = cfg.get_vec3("ueg-scan.nu0", Vec3(0.0, 0.0, 1.0));
  const DomainKind kind = parse_domain_kind(cfg.get_choice("ueg-scan.domain", "tetra", {"tetra", "tetrahedron", "box", "cube"}));
  const std::string policy_name = cfg.get_choice("ueg-scan.delta_policy", "fixed", {"fixed", "thermodynamic"});
  const DeltaPolicy policy = policy_name == "fixed" ? DeltaPolicy::fixed : DeltaPolicy::thermodynamic;
  const double delta = cfg.get_double("ueg-scan.delta", 1.0);
  const std::vector<double> scales = cfg.get_list("ueg-scan.scales", {4.0, 8.0, 16.0, 32.0});
  // "auto" picks the smallest grid that resolves the mollifier support, up to max_points per axis.
  const bool auto_points = !cfg.has("ueg-scan.points") || cfg.get_string("ueg-scan.points", "") == "auto";
  const int fixed_points = auto_points ? 0 : cfg.get_int("ueg-scan.points", 0);
  const int max_points = cfg.get_int("ueg-scan.max_points", 256);
  const double resolution = cfg.get_double("ueg-scan.layer_resolution", 1.0);
  SurrogateOptions opt;
  opt.spec = read_spec(cfg, "ueg-scan");
  opt.exchange = cfg.get_bool("ueg-scan.exchange", false);
  opt.exchange_points = cfg.get_int("ueg-scan.exchange_points", opt.exchange_points);
  const double exponent_tol = cfg.get_double("ueg-scan.exponent_tol", 0.05);
  cfg.check_unused({"job", "ueg-scan"});
  if (scales.empty()) throw DomainError("ueg-scan.scales: at least one scale required");

  job.body.section("scan");
  job.body.add("domain", to_string(kind));
  job.body.add("delta_policy", policy_name);
  job.body.add("surrogate", true);

  std::ostringstream tsv;
  tsv << EnergyPerVolumeReport::tsv_header() << "\n";
  bool finite = true;
  std::vector<double> gauge;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double l = scales[i];
    job.step = "scale " + format_double(l);
    const double d = policy_delta(policy, delta, l, rho0);
    const ConvexPolyhedron omega = ueg_domain(kind, l);
    const int points = auto_points ? std::min(max_points, resolving_points(omega, d, resolution)) : fixed_points;
    const UegTrial trial = build_trial(rho0, nu0, omega, d, std::nullopt, points);
    EnergyPerVolumeReport r = surrogate_energies(trial, opt);
    r.scale = l;
    finite = finite && std::isfinite(r.energy_per_volume) && std::isfinite(r.kinetic_per_volume);
    gauge.push_back(r.gauge_correction_per_volume);
    tsv << r.tsv_row() << "\n";
    if (r.layer_resolution > resolution)
      job.warnings.push_back("scale " + format_double(l) + ": grid spacing is " + format_double(r.layer_resolution) +
                             " mollifier radii; layer terms are under-resolved");
    job.body.section("scale_" + std::to_string(i));
    job.body.add("points", points);
    job.body.append(r.to_report());
  }
  job.check("finite_values", finite);

  job.step = "fitting the gauge-term growth";
  GaugeScan fit;
  std::vector<double> distinct = scales;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 4) {
    // Too few scales for a fit; the rows are still reported.
  } else if (policy == DeltaPolicy::fixed) {
    fit = gauge_term_scan(rho0, nu0, ueg_domain(kind, 1.0), delta, scales);
  } else {
    // Least squares of log value against log scale over the rows themselves.
    fit.scales = scales;
    fit.values = gauge;
    bool positive = true;
    for (double v : gauge) positive = positive && v > 0.0;
    if (positive) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double n = static_cast<double>(scales.size());
      for (std::size_t i = 0; i < scales.size(); ++i) {
        const double x = std::log(scales[i]), y = std::log(gauge[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      const double den = n * sxx - sx * sx;
      if (den > 0.0) {
        fit.exponent = (n * sxy - sx * sy) / den;
        fit.constant = std::exp((sy - fit.exponent * sx) / n);
        fit.fitted = true;
        for (std::size_t i = 0; i < scales.size(); ++i)
          fit.max_residual = std::max(
              fit.max_residual, std::abs(std::log(gauge[i]) - std::log(fit.constant) - fit.exponent * std::log(scales[i])));
      }
    }
  }
  job.body.section("gauge_growth");
  job.body.append(fit.to_report());
  if (fit.fitted) {
    tsv << "exponent\t" << format_double(fit.exponent) << "\tconstant\t" << format_double(fit.constant) << "\n";
    job.check("gauge_exponent", std::abs(fit.exponent - 2.0) <= exponent_tol);
  } else {
    tsv << "exponent\tnan\tconstant\tnan\n";
  }
  job.console = tsv.str();
  job.files.emplace_back("ueg-scan.tsv", tsv.str());
}

void acceptance_job(Job& job) {
  const JobConfig& cfg = job.cfg;
  AcceptanceOptions opt;
  opt.seed = job.seed;
  for (double v : cfg.get_list("acceptance.only", {})) {
    if (v != std::floor(v) || v < 1 || v > acceptance_criterion_count)
      throw DomainError("acceptance.only: criteria are numbered 1 to " + std::to_string(acceptance_criterion_count));
    opt.only.push_back(static_cast<int>(v));
  }
  cfg.check_unused({"job", "acceptance"});
  std::ostringstream lines;
  job.step = "running criteria";
  run_acceptance(opt, [&](const CriterionResult& r) {
    lines << summary_line(r) << "\n";
    job.body.section("criterion_" + std::to_string(r.id));
    job.body.add("name", r.name);
    job.body.add("detail", r.detail);
    job.body.append(r.report);
    job.check("criterion_" + std::to_string(r.id), r.pass);
  });
  job.console = lines.str();
}

const std::vector<std::pair<std::string, std::function<void(Job&)>>>& jobs() {
  static const std::vector<std::pair<std::string, std::function<void(Job&)>>> table = {
      {"construct", construct_job}, {"verify", verify_job},         {"tile", tile_job},
      {"ueg-scan", ueg_scan_job},   {"acceptance", acceptance_job}};
  return table;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw DomainError("cannot write " + p.string());
  f << text;
  if (!f) throw DomainError("cannot write " + p.string());
}

}  // namespace

const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& j : jobs()) n.push_back(j.first);
    return n;
  }();
  return names;
}

int run_job(const std::string& command, const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  Job job{cfg, command};
  try {
    const auto it = std::find_if(jobs().begin(), jobs().end(), [&](const auto& j) { return j.first == command; });
    if (it == jobs().end()) throw DomainError("unknown command '" + command + "'");
    job.seed = cfg.get_uint("job.seed", default_seed);
    const int workers = cfg.get_int("job.workers", 0);
    if (workers < 0) throw DomainError("job.workers must be nonnegative");
    if (workers > 0) set_worker_count(workers);
    const std::string out_dir = cfg.get_string("job.out", "");
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
    }
    it->second(job);

    Report report;
    report.section("job");
    report.add("command", command);
    report.add("config_hash", hex64(cfg.hash({"job", command})));
    report.add("seed", std::to_string(job.seed));
    report.append(job.body);
    report.section("summary");
    std::size_t failed = 0;
    for (const auto& [name, ok] : job.checks) {
      report.add("check_" + name, ok);
      if (!ok) ++failed;
    }
    report.add("checks", job.checks.size());
    report.add("failed", failed);
    report.add("pass", job.pass());

    out << (job.console.empty() ? report.str() : job.console);
    for (const auto& w : job.warnings) err << command << ": warning: " << w << "\n";
    if (!out_dir.empty()) {
      const std::filesystem::path dir(out_dir);
      write_text(dir / (command + ".report"), report.str());
      for (const auto& [name, text] : job.files) write_text(dir / name, text);
    }
    if (!job.pass()) {
      for (const auto& [name, ok] : job.checks)
        if (!ok) err << command << ": check failed: " << name << "\n";
      return exit_check_failure;
    }
    return exit_pass;
  } catch (const ParseError& e) {
    err << "error: " << command << ": " << job.step << ": " << e.what() << "\n";
    return exit_usage;
  } catch (const DomainError& e) {
    err << "error: " << command << ": " << job.step << ": " << e.what() << "\n";
    return exit_usage;
  } catch (const DimensionError& e) {
    err << "error: " << command << ": " << job.step << ": " << e.what() << "\n";
    return exit_usage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << command << ": " << job.step << ": " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << command << ": " << job.step << ": " << e.what() << "\n";
    return exit_check_failure;
  }
}

}  // namespace mueg
