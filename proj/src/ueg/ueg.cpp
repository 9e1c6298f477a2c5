#include "mueg/ueg/ueg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "mueg/errors.hpp"
#include "mueg/fields/differential.hpp"
#include "mueg/fields/integrate.hpp"
#include "mueg/fields/parallel.hpp"
#include "mueg/kernels/constants.hpp"
#include "mueg/rdm/coulomb.hpp"
#include "mueg/tiling/tiling.hpp"

namespace mueg {

ConvexPolyhedron ueg_domain(DomainKind kind, double l) {
  if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("domain scale must be positive");
  if (kind == DomainKind::box) return ConvexPolyhedron::box(Vec3::Constant(-0.5 * l), Vec3::Constant(0.5 * l));
  static const TetraDecomposition dec;
  return dec.reference_polyhedron(l);
}

DomainKind parse_domain_kind(const std::string& s) {
  if (s == "tetra" || s == "tetrahedron") return DomainKind::tetrahedron;
  if (s == "box" || s == "cube") return DomainKind::box;
  throw ParseError("domain", 0, "unknown domain type '" + s + "'");
}

std::string to_string(DomainKind kind) { return kind == DomainKind::box ? "box" : "tetra"; }

namespace {

struct PointKey {
  std::uint64_t a, b, c;
  bool operator==(const PointKey&) const = default;
};

struct PointKeyHash {
  std::size_t operator()(const PointKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t v : {k.a, k.b, k.c}) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

struct DensityCache {
  std::mutex mutex;
  std::unordered_map<PointKey, std::pair<double, Vec3>, PointKeyHash> values;
};

SmoothScalar make_density(double rho0, const ConvexPolyhedron& omega, const Mollifier& m) {
  auto cache = std::make_shared<DensityCache>();
  return SmoothScalar([rho0, omega, m, cache](const Vec3& x, double& v, Vec3& g) {
    if (rho0 == 0.0) {
      v = 0.0;
      g.setZero();
      return;
    }
    switch (m.classify(omega, x)) {
      case SmearCase::one:
        v = rho0;
        g.setZero();
        return;
      case SmearCase::zero:
        v = 0.0;
        g.setZero();
        return;
      case SmearCase::transition:
        break;
    }
    const PointKey key{std::bit_cast<std::uint64_t>(x[0]), std::bit_cast<std::uint64_t>(x[1]),
                       std::bit_cast<std::uint64_t>(x[2])};
    {
      std::lock_guard<std::mutex> lock(cache->mutex);
      auto it = cache->values.find(key);
      if (it != cache->values.end()) {
        v = it->second.first;
        g = it->second.second;
        return;
      }
    }
    v = rho0 * std::clamp(m.smeared_indicator(omega, x), 0.0, 1.0);
    g = rho0 * m.smeared_indicator_gradient(omega, x);
    std::lock_guard<std::mutex> lock(cache->mutex);
    cache->values.emplace(key, std::make_pair(v, g));
  });
}

double gauge_from_moments(double rho0, const Vec3& nu, const Mat3& second, double volume) {
  return rho0 / (4.0 * volume) * (nu.squaredNorm() * second.trace() - nu.dot(second * nu));
}

}  // namespace

UegTrial::UegTrial(double rho0, const Vec3& nu0, ConvexPolyhedron omega, double delta, GridSpec grid)
    : rho0_(rho0),
      nu0_(nu0),
      omega_(std::move(omega)),
      mollifier_(delta),
      grid_(grid),
      density_(make_density(rho0, omega_, mollifier_)),
      moments_(smeared_moments(omega_, mollifier_)) {}

CurrentDecomposition UegTrial::decomposition() const {
  CurrentDecomposition d;
  d.w = SmoothVector::rotation(nu0_);
  return d;
}

ScalarField UegTrial::density_field() const {
  ScalarField f(grid_);
  parallel_for(grid_.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) f(p) = density_.value(grid_.point(p));
  });
  return f;
}

VectorField UegTrial::current_field() const {
  VectorField f(grid_);
  parallel_for(grid_.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      const Vec3 x = grid_.point(p);
      f.set_vec(p, density_.value(x) * 0.5 * nu0_.cross(x));
    }
  });
  return f;
}

double UegTrial::gauge_correction_per_volume() const {
  return gauge_from_moments(rho0_, nu0_, moments_.second, volume());
}

GridSpec covering_grid(const ConvexPolyhedron& omega, double delta, int n) {
  if (n < 4) throw DomainError("covering grid needs at least 4 points per axis");
  auto [lo, hi] = omega.bounding_box();
  const double r = 0.1 * delta;
  lo.array() -= r;
  hi.array() += r;
  // Two extra cells on each side: h = (w + 4h) / (n - 1).
  Vec3 h = (hi - lo) / (n - 5);
  return GridSpec::box(lo - 2.0 * h, hi + 2.0 * h, {n, n, n});
}

int resolving_points(const ConvexPolyhedron& omega, double delta, double ratio) {
  if (!(delta > 0.0) || !(ratio > 0.0)) throw DomainError("resolving_points needs positive delta and ratio");
  auto [lo, hi] = omega.bounding_box();
  const double r = 0.1 * delta;
  const double w = (hi - lo).maxCoeff() + 2.0 * r;
  return std::max(4, static_cast<int>(std::ceil(w / (ratio * r))) + 5);
}

UegTrial build_trial(double rho0, const Vec3& nu0, const ConvexPolyhedron& omega, double delta,
                     std::optional<GridSpec> grid, int points) {
  if (!(rho0 >= 0.0) || !std::isfinite(rho0)) throw DomainError("trial density rho0 must be finite and >= 0");
  if (!nu0.allFinite()) throw DomainError("trial vorticity must be finite");
  const Mollifier m(delta);
  if (m.radius() > 0.5 * omega.diameter()) throw DomainError("mollifier width too large for the domain");
  const GridSpec g = grid ? *grid : covering_grid(omega, delta, points);
  g.validate();
  if (g.dim != 3) throw DimensionError("trial states live on three-dimensional grids");
  auto [lo, hi] = omega.bounding_box();
  if ((g.lower().array() > lo.array() - m.radius()).any() || (g.upper().array() < hi.array() + m.radius()).any())
    throw DomainError("support of the smeared domain outgrows the grid");
  return UegTrial(rho0, nu0, omega, delta, g);
}

Report TrialInvariants::to_report() const {
  Report r;
  r.add("vorticity_error", vorticity_error);
  r.add("symmetric_strain", symmetric_strain);
  r.add("jacobian_norm_error", jacobian_norm_error);
  r.add("barycentre_error", barycentre_error);
  r.add("evaluated_points", evaluated);
  r.add("pass", pass);
  return r;
}

TrialInvariants check_trial_invariants(const UegTrial& trial, double rho_floor_rel, double tol) {
  TrialInvariants out;
  const GridSpec& g = trial.grid();
  const ScalarField rho = trial.density_field();
  const VectorField jp = trial.current_field();
  const double floor = rho_floor_rel * trial.rho0();
  VectorField u(g);
  std::vector<char> ok(g.size(), 0);
  for (std::size_t p = 0; p < g.size(); ++p) {
    ok[p] = rho(p) > floor;
    u.set_vec(p, ok[p] ? Vec3(jp.vec(p) / rho(p)) : Vec3::Zero());
  }
  const VectorField c = curl(u);
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!g.interior(p, 2)) continue;
    const auto ijk = g.coords(p);
    bool stencil = true;
    for (int a = 0; a < 3 && stencil; ++a)
      for (int s = -2; s <= 2 && stencil; ++s) {
        auto q = ijk;
        q[a] += s;
        stencil = ok[g.index(q[0], q[1], q[2])];
      }
    if (!stencil) continue;
    ++out.evaluated;
    const double scale = std::max(1.0, trial.nu0().norm());
    out.vorticity_error = std::max(out.vorticity_error, (c.vec(p) - trial.nu0()).norm() / scale);
  }
  const Mat3 d = SmoothVector::rotation(trial.nu0()).jacobian(Vec3(0.3, -0.7, 1.1));
  out.symmetric_strain = (0.5 * (d + d.transpose())).norm();
  out.jacobian_norm_error = std::abs(d.norm() - trial.nu0().norm() / std::sqrt(2.0));
  out.barycentre_error = trial.moments().first.norm() / (trial.volume() * trial.domain().diameter());
  out.pass = (trial.rho0() == 0.0 || out.evaluated > 0) && out.vorticity_error <= tol && out.symmetric_strain == 0.0 &&
             out.jacobian_norm_error <= 1e-12 * std::max(1.0, trial.nu0().norm()) && out.barycentre_error <= tol;
  return out;
}

Report GaugeScan::to_report() const {
  Report r;
  for (std::size_t i = 0; i < scales.size(); ++i)
    r.add("gauge_correction_per_volume[l=" + format_double(scales[i]) + "]", values[i]);
  r.add("fitted", fitted);
  r.add("exponent", exponent);
  r.add("constant", constant);
  r.add("max_log_residual", max_residual);
  return r;
}

GaugeScan gauge_term_scan(double rho0, const Vec3& nu0, const ConvexPolyhedron& omega, double delta,
                          const std::vector<double>& scales) {
  std::vector<double> sorted = scales;
  std::sort(sorted.begin(), sorted.end());
  if (std::unique(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError("gauge scan scales must be distinct");
  if (scales.size() < 4) throw DomainError("gauge scan needs at least 4 scales");
  if (!(sorted.front() > 0.0)) throw DomainError("gauge scan scales must be positive");
  const Mollifier m(delta);
  GaugeScan out;
  out.scales = scales;
  for (double l : scales) {
    const ConvexPolyhedron dom = omega.scaled(l);
    const SmearedMoments mo = smeared_moments(dom, m);
    out.values.push_back(gauge_from_moments(rho0, nu0, mo.second, dom.volume()));
  }
  if (rho0 == 0.0 || nu0.squaredNorm() == 0.0) return out;
  const std::size_t n = scales.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(out.values[i] > 0.0) || !std::isfinite(out.values[i]))
      throw NumericalError("gauge correction is not positive at scale " + format_double(scales[i]));
    const double x = std::log(scales[i]), y = std::log(out.values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 1e-12 * n * sxx)) throw NumericalError("degenerate gauge scan fit");
  out.exponent = (n * sxy - sx * sy) / den;
  const double intercept = (sy - out.exponent * sx) / n;
  out.constant = std::exp(intercept);
  for (std::size_t i = 0; i < n; ++i)
    out.max_residual = std::max(
        out.max_residual, std::abs(std::log(out.values[i]) - intercept - out.exponent * std::log(scales[i])));
  out.fitted = true;
  return out;
}

Report EnergyPerVolumeReport::to_report() const {
  Report r;
  r.add("surrogate", surrogate);
  r.add("rho0", rho0);
  r.add("nu0", format_double(nu0[0]) + "," + format_double(nu0[1]) + "," + format_double(nu0[2]));
  r.add("delta", delta);
  r.add("scale", scale);
  r.add("volume", volume);
  r.add("kinetic_per_volume", kinetic_per_volume);
  r.add("gauge_correction_per_volume", gauge_correction_per_volume);
  r.add("corrected_kinetic_per_volume", corrected_kinetic_per_volume);
  r.add("tf_per_volume", tf_per_volume);
  r.add("weizsacker_per_volume", weizsacker_per_volume);
  r.add("gauge_term_per_volume", gauge_term_per_volume);
  r.add("strain_per_volume", strain_per_volume);
  r.add("floor_per_volume", floor_per_volume);
  r.add("width_gradient_per_volume", width_gradient_per_volume);
  r.add("epsilon", epsilon);
  r.add("tf_factor", tf_factor);
  r.add("tf_filling", tf_filling);
  r.add("layer_resolution", layer_resolution);
  r.add("exchange_computed", exchange_computed);
  if (exchange_computed) r.add("exchange_per_volume", exchange_per_volume);
  r.add("energy_per_volume", energy_per_volume);
  return r;
}

std::string EnergyPerVolumeReport::tsv_header() {
  return "scale\tdelta\tvolume\tkinetic_per_volume\tgauge_correction_per_volume\tcorrected_kinetic_per_volume\t"
         "tf_per_volume\tweizsacker_per_volume\tgauge_term_per_volume\tstrain_per_volume\tfloor_per_volume\t"
         "width_gradient_per_volume\tepsilon\texchange_per_volume\tenergy_per_volume\tlayer_resolution\tsurrogate";
}

std::string EnergyPerVolumeReport::tsv_row() const {
  std::ostringstream os;
  for (double v : {scale, delta, volume, kinetic_per_volume, gauge_correction_per_volume, corrected_kinetic_per_volume,
                   tf_per_volume, weizsacker_per_volume, gauge_term_per_volume, strain_per_volume, floor_per_volume,
                   width_gradient_per_volume, epsilon})
    os << format_double(v) << '\t';
  os << (exchange_computed ? format_double(exchange_per_volume) : std::string("nan")) << '\t'
     << format_double(energy_per_volume) << '\t' << format_double(layer_resolution) << '\t' << (surrogate ? "true" : "false");
  return os.str();
}

EnergyPerVolumeReport surrogate_energies(const UegTrial& trial, const SurrogateOptions& opt) {
  opt.spec.validate();
  EnergyPerVolumeReport r;
  r.rho0 = trial.rho0();
  r.nu0 = trial.nu0();
  r.delta = trial.mollifier().delta();
  r.volume = trial.volume();
  const GridSpec& tg = trial.grid();
  r.layer_resolution =
      std::max({tg.spacing[0], tg.spacing[1], tg.spacing[2]}) / trial.mollifier().radius();
  const CurrentDecomposition dec = trial.decomposition();
  const UpperFunctional up = kinetic_upper_functional(trial.density(), dec, opt.spec, trial.grid());
  const double v = r.volume;
  r.kinetic_per_volume = up.value / v;
  r.epsilon = up.epsilon;
  r.tf_factor = up.terms.tf_factor;
  r.tf_per_volume = up.terms.tf_term / v;
  r.weizsacker_per_volume = up.terms.weizsacker_term / v;
  r.gauge_term_per_volume = up.terms.gauge_term / v;
  r.strain_per_volume = up.terms.strain_vorticity_term / v;
  r.floor_per_volume = up.terms.floor_term / v;
  r.width_gradient_per_volume = up.terms.width_gradient_term / v;
  r.gauge_correction_per_volume = trial.gauge_correction_per_volume();
  r.corrected_kinetic_per_volume = r.kinetic_per_volume - r.gauge_correction_per_volume;
  if (trial.rho0() > 0.0) {
    const ScalarField rho = trial.density_field();
    std::vector<double> f(rho.size());
    for (std::size_t p = 0; p < rho.size(); ++p) f[p] = std::pow(rho(p) / trial.rho0(), 5.0 / 3.0);
    r.tf_filling = integrate_values(trial.grid(), f) / v;
  }
  r.energy_per_volume = r.corrected_kinetic_per_volume;
  if (opt.exchange) {
    if (opt.exchange_points > 24) throw DomainError("exchange refinement is limited to grids of at most 24^3 points");
    const GridSpec xg = GridSpec::box(trial.grid().lower(), trial.grid().upper(),
                                      {opt.exchange_points, opt.exchange_points, opt.exchange_points});
    if (trial.rho0() > 0.0) {
      const ConstructedRdmPtr gamma = build_rdm(trial.density(), dec, opt.spec);
      r.exchange_per_volume = coulomb_exchange(*gamma, xg) / v;
    }
    r.exchange_computed = true;
    r.energy_per_volume -= r.exchange_per_volume;
  }
  return r;
}

Report IsometryCheck::to_report() const {
  Report r;
  r.add("lhs_translated", lhs);
  r.add("rhs_rotated", rhs_rotated);
  r.add("predicted_offset", predicted_offset);
  r.add("measured_offset", measured_offset);
  r.add("discrepancy", discrepancy);
  r.add("offset_error", offset_error);
  r.add("barycentre_error", barycentre_error);
  r.add("grid_exact", grid_exact);
  r.add("tolerance", tolerance);
  r.add("pass", pass);
  return r;
}

namespace {

// Column permutation and signs when r is a signed permutation matrix.
bool signed_permutation(const Mat3& r, std::array<int, 3>& src) {
  for (int i = 0; i < 3; ++i) {
    int found = -1;
    for (int k = 0; k < 3; ++k) {
      const double v = std::abs(r(k, i));
      if (v == 1.0) {
        if (found >= 0) return false;
        found = k;
      } else if (v != 0.0) {
        return false;
      }
    }
    if (found < 0) return false;
    src[i] = found;
  }
  return true;
}

}  // namespace

IsometryCheck isometry_identity_check(const UegTrial& trial, const Mat3& r, const Vec3& a,
                                      const ConstructorSpec& spec, double tol) {
  const ConvexPolyhedron& omega = trial.domain();
  const double diam = omega.diameter();
  if (omega.barycenter().norm() > 1e-12 * diam) throw DomainError("isometry check needs a domain with barycentre 0");
  if ((r.transpose() * r - Mat3::Identity()).norm() > 1e-12) throw DomainError("isometry check needs R orthogonal");
  IsometryCheck out;
  out.tolerance = tol;
  const GridSpec& g = trial.grid();
  const ConvexPolyhedron pre = omega.transformed(r.transpose(), -(r.transpose() * a));
  GridSpec gp = g;
  std::array<int, 3> src{};
  out.grid_exact = signed_permutation(r, src);
  if (out.grid_exact) {
    const Vec3 c0 = r.transpose() * (g.lower() - a), c1 = r.transpose() * (g.upper() - a);
    for (int i = 0; i < 3; ++i) {
      gp.origin[i] = std::min(c0[i], c1[i]);
      gp.spacing[i] = g.spacing[src[i]];
      gp.counts[i] = g.counts[src[i]];
    }
  } else {
    auto [lo, hi] = pre.bounding_box();
    const double pad = trial.mollifier().radius() + 2.0 * g.spacing[0];
    for (int i = 0; i < 3; ++i) {
      gp.origin[i] = lo[i] - pad;
      gp.spacing[i] = g.spacing[0];
      gp.counts[i] = static_cast<int>(std::ceil((hi[i] - lo[i] + 2.0 * pad) / g.spacing[0])) + 1;
    }
  }
  const UegTrial moved(trial.rho0(), trial.nu0(), pre, trial.mollifier().delta(), gp);
  out.lhs = bound_terms(moved.density(), moved.decomposition(), spec, gp).total();
  CurrentDecomposition rotated;
  const Vec3 rnu = r * trial.nu0();
  rotated.w = SmoothVector::rotation(rnu);
  out.rhs_rotated = bound_terms(trial.density(), rotated, spec, g).total();
  out.predicted_offset = 0.25 * trial.rho0() * rnu.cross(a).squaredNorm() * trial.moments().mass;
  out.measured_offset = out.lhs - out.rhs_rotated;
  const double excess = std::abs(out.measured_offset - out.predicted_offset);
  out.discrepancy = std::abs(out.lhs) > 0.0 ? excess / std::abs(out.lhs) : excess;
  out.offset_error = out.predicted_offset > 0.0 ? excess / out.predicted_offset : out.discrepancy;
  out.barycentre_error = trial.moments().first.norm() / (trial.volume() * diam);

  BoundReport& b = out.bound;
  b.id = "isometry identity";
  b.tag = "translation and rotation of the trial";
  b.scale = "lhs";
  b.lhs = out.lhs;
  b.rhs = out.rhs_rotated + out.predicted_offset;
  b.tolerance = tol;
  b.margins = {-out.discrepancy};
  b.summarize();
  out.pass = out.discrepancy <= tol && out.offset_error <= tol && out.barycentre_error <= 1e-8;
  return out;
}

double policy_delta(DeltaPolicy policy, double fixed, double l, double rho0) {
  if (policy == DeltaPolicy::fixed) return fixed;
  if (!(rho0 > 0.0) || !(l > 0.0)) throw DomainError("width policy needs rho0 > 0 and l > 0");
  return std::pow(l, -1.0 / 3.0) * std::pow(rho0, -4.0 / 9.0);
}

}  // namespace mueg
