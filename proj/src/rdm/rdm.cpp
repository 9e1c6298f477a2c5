#include "mueg/rdm/rdm.hpp"

#include <cmath>
#include <mutex>

#include "mueg/fields/differential.hpp"
#include "mueg/fields/integrate.hpp"
#include "mueg/fields/parallel.hpp"
#include "mueg/report.hpp"

namespace mueg {

RdmObservables Rdm::observables(const GridSpec& g, const ObservableOptions& opt) const {
  return kernel_fd_observables(*this, g, opt);
}

Orbital Orbital::from_field(const ComplexScalarField& f) {
  ScalarField re(f.grid()), im(f.grid());
  for (std::size_t p = 0; p < f.size(); ++p) {
    re(p) = f(p).real();
    im(p) = f(p).imag();
  }
  auto ire = std::make_shared<LocalInterpolant>(std::move(re));
  auto iim = std::make_shared<LocalInterpolant>(std::move(im));
  Orbital o;
  o.value = [ire, iim](const Vec3& x) { return cplx(ire->value(x), iim->value(x)); };
  return o;
}

LowRankRdm::LowRankRdm(std::vector<Orbital> orbitals, std::vector<double> occupations, int dim)
    : orbitals_(std::move(orbitals)), occupations_(std::move(occupations)), dim_(dim) {
  if (dim < 1 || dim > 3) throw DimensionError("density matrix dimension must be 1, 2 or 3");
  if (orbitals_.size() != occupations_.size()) throw DomainError("one occupation per orbital required");
  for (double l : occupations_)
    if (!(l >= 0.0 && l <= 1.0)) throw DomainError("occupation outside [0, 1]");
  for (const auto& o : orbitals_)
    if (!o.value) throw DomainError("orbital without value function");
}

cplx LowRankRdm::kernel(const Vec3& x, const Vec3& y) const {
  cplx s = 0.0;
  for (std::size_t j = 0; j < orbitals_.size(); ++j)
    s += occupations_[j] * orbitals_[j].value(x) * std::conj(orbitals_[j].value(y));
  return s;
}

double LowRankRdm::trace() const {
  double s = 0.0;
  for (double l : occupations_) s += l;
  return s;
}

void LowRankRdm::sample(const GridSpec& g, std::vector<ComplexScalarField>& values,
                        std::vector<ComplexVectorField>& grads) const {
  const int d = g.dim;
  values.clear();
  grads.clear();
  for (const auto& o : orbitals_) {
    ComplexScalarField v(g);
    ComplexVectorField gr(g);
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t p = b; p < e; ++p) {
        const Vec3 x = g.point(p);
        v(p) = o.value(x);
        if (o.gradient) gr.set_vec(p, o.gradient(x));
      }
    });
    if (!o.gradient) {
      for (int a = 0; a < d; ++a) {
        auto da = partial(g, v.values(), a);
        for (std::size_t p = 0; p < g.size(); ++p) gr(p, a) = da[p];
      }
    }
    if (!v.finite() || !gr.finite()) throw NumericalError("non-finite orbital sample");
    values.push_back(std::move(v));
    grads.push_back(std::move(gr));
  }
}

double LowRankRdm::orthonormality_defect(const GridSpec& g) const {
  std::vector<ComplexScalarField> v;
  std::vector<ComplexVectorField> gr;
  sample(g, v, gr);
  const auto w = grid_weights(g);
  double worst = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j)
    for (std::size_t k = j; k < v.size(); ++k) {
      std::vector<double> re(g.size()), im(g.size());
      for (std::size_t p = 0; p < g.size(); ++p) {
        const cplx z = std::conj(v[j](p)) * v[k](p);
        re[p] = z.real();
        im[p] = z.imag();
      }
      const cplx s(integrate_values(g, re), integrate_values(g, im));
      worst = std::max(worst, std::abs(s - (j == k ? 1.0 : 0.0)));
    }
  return worst;
}

RdmObservables LowRankRdm::observables(const GridSpec& g, const ObservableOptions& opt) const {
  g.validate();
  if (g.dim != dim_) throw DimensionError("grid and density matrix dimensions differ");
  if (opt.orthonormality_tol >= 0.0) {
    const double defect = orthonormality_defect(g);
    if (defect > opt.orthonormality_tol)
      throw DomainError("orbitals are not orthonormal on the grid (defect " + format_double(defect) + ")");
  }
  std::vector<ComplexScalarField> v;
  std::vector<ComplexVectorField> gr;
  sample(g, v, gr);
  const int d = g.dim;
  RdmObservables obs;
  obs.grid = g;
  obs.rho = ScalarField(g);
  obs.zeta = ComplexVectorField(g);
  obs.tau_tensor = ComplexTensorField(g);
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double l = occupations_[j];
    for (std::size_t p = 0; p < g.size(); ++p) {
      const cplx phi = v[j](p);
      obs.rho(p) += l * std::norm(phi);
      for (int a = 0; a < d; ++a) {
        obs.zeta(p, a) += l * gr[j](p, a) * std::conj(phi);
        for (int b = 0; b < d; ++b) obs.tau_tensor.at(p, a, b) += l * gr[j](p, a) * std::conj(gr[j](p, b));
      }
    }
  }
  finalize_observables(obs, opt.rho_floor_rel);
  double t = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    std::vector<double> f(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) f[p] = gr[j].vec(p).squaredNorm();
    t += occupations_[j] * integrate_values(g, f);
  }
  obs.kinetic_energy = t;
  return obs;
}

double FermiRdm::length_scale(const Vec3&) const { return 1.0 / k_.base().fermi_radius(); }

GaugeFunction::GaugeFunction(std::function<double(const Vec3&)> value, std::function<Vec3(const Vec3&)> gradient)
    : value_(std::move(value)), gradient_(std::move(gradient)) {}

GaugeFunction GaugeFunction::quadratic(const Mat3& q, const Vec3& b, double c) {
  const Mat3 s = 0.5 * (q + q.transpose());
  return GaugeFunction([s, b, c](const Vec3& x) { return 0.5 * x.dot(s * x) + b.dot(x) + c; },
                       [s, b](const Vec3& x) -> Vec3 { return s * x + b; });
}

GaugeFunction GaugeFunction::from_field(const ScalarField& g) {
  auto ip = std::make_shared<LocalInterpolant>(g);
  return GaugeFunction([ip](const Vec3& x) { return ip->value(x); },
                       [ip](const Vec3& x) { return ip->gradient(x); });
}

const VectorField& GaugeFunction::gradient_field(const GridSpec& g) const {
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  if (!cache_ || !(cache_->grid() == g)) {
    auto f = std::make_shared<VectorField>(g);
    for (std::size_t p = 0; p < g.size(); ++p) f->set_vec(p, gradient_(g.point(p)));
    cache_ = f;
  }
  return *cache_;
}

namespace {

class GaugedRdm : public Rdm {
 public:
  GaugedRdm(RdmPtr base, GaugeFunction g) : base_(std::move(base)), g_(std::move(g)) {}
  int dim() const override { return base_->dim(); }
  cplx kernel(const Vec3& x, const Vec3& y) const override { return phase(x, y) * base_->kernel(x, y); }
  cplx kernel_near(const Vec3& x, const Vec3& y, const Vec3& anchor) const override {
    return phase(x, y) * base_->kernel_near(x, y, anchor);
  }
  double length_scale(const Vec3& x) const override { return base_->length_scale(x); }

 private:
  cplx phase(const Vec3& x, const Vec3& y) const { return std::polar(1.0, g_.value(y) - g_.value(x)); }
  RdmPtr base_;
  GaugeFunction g_;
};

class AffineRdm : public Rdm {
 public:
  AffineRdm(RdmPtr base, const Mat3& m, const Vec3& a, double det)
      : base_(std::move(base)), m_(m), a_(a), det_(det), stretch_(m.norm()) {}
  int dim() const override { return base_->dim(); }
  cplx kernel(const Vec3& x, const Vec3& y) const override { return det_ * base_->kernel(map(x), map(y)); }
  cplx kernel_near(const Vec3& x, const Vec3& y, const Vec3& anchor) const override {
    return det_ * base_->kernel_near(map(x), map(y), map(anchor));
  }
  double length_scale(const Vec3& x) const override { return base_->length_scale(map(x)) / stretch_; }

 private:
  Vec3 map(const Vec3& x) const { return m_ * x + a_; }
  RdmPtr base_;
  Mat3 m_;
  Vec3 a_;
  double det_;
  double stretch_;
};

// Embeds the leading d x d block of m into an otherwise trivial map; returns |det|.
double affine_setup(int d, const Mat3& m, const Vec3& a, Mat3& mm, Vec3& aa) {
  mm = Mat3::Identity();
  aa = Vec3::Zero();
  mm.topLeftCorner(d, d) = m.topLeftCorner(d, d);
  aa.head(d) = a.head(d);
  const double det = std::abs(mm.determinant());
  if (!(det > 1e-14 * std::pow(mm.norm(), 3))) throw DomainError("singular affine map");
  return det;
}

}  // namespace

RdmPtr gauge_transform(const RdmPtr& gamma, const GaugeFunction& g) {
  if (auto lr = std::dynamic_pointer_cast<const LowRankRdm>(gamma)) {
    std::vector<Orbital> out;
    for (const auto& o : lr->orbitals()) {
      Orbital t;
      auto f = o;
      t.value = [f, g](const Vec3& x) { return std::polar(1.0, -g.value(x)) * f.value(x); };
      if (o.gradient)
        t.gradient = [f, g](const Vec3& x) -> CVec3 {
          const cplx ph = std::polar(1.0, -g.value(x));
          const cplx v = f.value(x);
          return ph * (f.gradient(x) - cplx(0.0, 1.0) * g.gradient(x).cast<cplx>() * v);
        };
      out.push_back(std::move(t));
    }
    return std::make_shared<LowRankRdm>(std::move(out), lr->occupations(), lr->dim());
  }
  return std::make_shared<GaugedRdm>(gamma, g);
}

RdmPtr affine_transform(const RdmPtr& gamma, const Mat3& m, const Vec3& a) {
  Mat3 mm;
  Vec3 aa;
  const double det = affine_setup(gamma->dim(), m, a, mm, aa);
  if (auto lr = std::dynamic_pointer_cast<const LowRankRdm>(gamma)) {
    const double s = std::sqrt(det);
    std::vector<Orbital> out;
    for (const auto& o : lr->orbitals()) {
      Orbital t;
      auto f = o;
      t.value = [f, mm, aa, s](const Vec3& x) { return s * f.value(mm * x + aa); };
      if (o.gradient)
        t.gradient = [f, mm, aa, s](const Vec3& x) -> CVec3 {
          return s * (mm.transpose().cast<cplx>() * f.gradient(mm * x + aa));
        };
      out.push_back(std::move(t));
    }
    return std::make_shared<LowRankRdm>(std::move(out), lr->occupations(), lr->dim());
  }
  return std::make_shared<AffineRdm>(gamma, mm, aa, det);
}

DensityCurrentPair affine_transform_pair(const DensityCurrentPair& p, const Mat3& m, const Vec3& a) {
  Mat3 mm;
  Vec3 aa;
  const double det = affine_setup(3, m, a, mm, aa);
  DensityCurrentPair out;
  auto rho = p.rho;
  auto jp = p.jp;
  out.rho = [rho, mm, aa, det](const Vec3& x) { return det * rho(mm * x + aa); };
  out.jp = [jp, mm, aa, det](const Vec3& x) -> Vec3 { return det * (mm.transpose() * jp(mm * x + aa)); };
  return out;
}

}  // namespace mueg
