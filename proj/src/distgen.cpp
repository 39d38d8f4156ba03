#include "confset/distgen.hpp"

#include "confset/random.hpp"

#include <numbers>

namespace confset {

void MixtureSpec::validate() const {
  if (k_classes < 2) throw std::invalid_argument("mixture needs K >= 2");
  if (dim < 1) throw std::invalid_argument("mixture needs d >= 1");
  if (means.rows() != k_classes || means.cols() != dim)
    throw std::invalid_argument("mixture means must be K x d");
  if (!means.allFinite()) throw std::invalid_argument("mixture means must be finite");
}

MixtureSpec sample_mixture_spec(int k_classes, int dim, std::uint64_t seed) {
  if (k_classes < 2) throw std::invalid_argument("sample_mixture_spec: K >= 2 required");
  if (dim < 1) throw std::invalid_argument("sample_mixture_spec: d >= 1 required");
  Rng rng(seed);
  MixtureSpec spec{k_classes, dim, Eigen::MatrixXd(k_classes, dim), seed};
  for (int k = 0; k < k_classes; ++k)
    for (int j = 0; j < dim; ++j) spec.means(k, j) = 4.0 * rng.uniform();
  return spec;
}

Eigen::VectorXd mixture_posterior_at(const Eigen::VectorXd& x, const MixtureSpec& spec) {
  return mixture_posterior(x.transpose(), spec).row(0).transpose();
}

LabeledDataset sample_labeled(const MixtureSpec& spec, Index n, std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("sample_labeled: n >= 1 required");
  Rng rng(seed);
  Eigen::MatrixXd x(n, spec.dim);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const auto k = static_cast<Index>(rng.below(static_cast<std::uint64_t>(spec.k_classes)));
    y[static_cast<std::size_t>(i)] = static_cast<int>(k) + 1;
    for (int j = 0; j < spec.dim; ++j) x(i, j) = spec.means(k, j) + rng.normal();
  }
  return LabeledDataset(std::move(x), std::move(y), spec.k_classes);
}

UnlabeledDataset sample_unlabeled(const MixtureSpec& spec, Index n, std::uint64_t seed) {
  spec.validate();
  if (n < 0) throw std::invalid_argument("sample_unlabeled: N >= 0 required");
  if (n == 0) return UnlabeledDataset(Eigen::MatrixXd(0, spec.dim), spec.dim);
  return UnlabeledDataset(sample_labeled(spec, n, seed));
}

void PathologySpec::validate() const {
  if (beta < 2) throw std::invalid_argument("pathology needs beta >= 2");
  if (k_classes < 2 * beta) throw std::invalid_argument("pathology needs K >= 2 beta");
  if (dim < 1) throw std::invalid_argument("pathology needs d >= 1");
  if (!(r1 > 0.0 && r1 < r2 && 2.0 * r2 < r3)) throw std::invalid_argument("pathology needs 0 < r1 < r2 < 2 r2 < r3");
  if (!(c_l >= 0.0 && c_l <= 0.125)) throw std::invalid_argument("pathology needs 0 <= C_L <= 1/8");
  if (inner_mass() > 0.5 * beta / (beta + 1))
    throw std::invalid_argument("pathology mass budget violated: Leb(B(0, r1)) > beta / (2 (beta + 1))");
}

double PathologySpec::inner_mass() const {
  const double half_d = 0.5 * dim;
  return std::pow(std::numbers::pi, half_d) / std::tgamma(half_d + 1.0) * std::pow(r1, dim);
}

PathologyRegion pathology_region(const Eigen::VectorXd& x, const PathologySpec& spec) {
  if (x.size() != spec.dim) throw std::invalid_argument("pathology: dimension mismatch");
  const double r = x.norm();
  constexpr double slack = 1e-12;
  if (r <= spec.r1 * (1 + slack)) return PathologyRegion::InnerBall;
  if (r >= spec.r2 * (1 - slack) && r <= 2 * spec.r2 * (1 + slack)) return PathologyRegion::MiddleAnnulus;
  if (r >= spec.r3 * (1 - slack) && r <= 2 * spec.r3 * (1 + slack)) return PathologyRegion::OuterAnnulus;
  return PathologyRegion::OffSupport;
}

Eigen::VectorXd pathology_posterior(const Eigen::VectorXd& x, const PathologySpec& spec) {
  if (!x.allFinite()) throw std::invalid_argument("pathology_posterior: non-finite input");
  const int lead = spec.beta + 1;
  const int rest = spec.k_classes - lead;
  const double r = x.norm();
  const auto bump = [&](double radius) { return spec.c_l * (1.0 - std::cos(2.0 * std::numbers::pi * r / radius)); };

  double leading = 0.0;
  double remaining = 0.0;
  switch (pathology_region(x, spec)) {
    case PathologyRegion::InnerBall: {
      const double c = bump(spec.r1);
      leading = 0.5 / lead + c / lead;
      remaining = 0.5 / rest - c / rest;
      break;
    }
    case PathologyRegion::MiddleAnnulus: {
      const double c = bump(spec.r2);
      leading = 1.0 / lead - c / lead;
      remaining = c / rest;
      break;
    }
    case PathologyRegion::OuterAnnulus: {
      const double c = bump(spec.r3);
      leading = 0.25 / lead - c / lead;
      remaining = 0.75 / rest + c / rest;
      break;
    }
    case PathologyRegion::OffSupport:
      throw std::invalid_argument("pathology_posterior: x is off the support (|x| = " + std::to_string(r) + ")");
  }
  Eigen::VectorXd p(spec.k_classes);
  p.head(lead).setConstant(leading);
  p.tail(rest).setConstant(remaining);
  return p;
}

Eigen::MatrixXd pathology_posterior(const Eigen::MatrixXd& x, const PathologySpec& spec) {
  Eigen::MatrixXd out(x.rows(), spec.k_classes);
  for (Index i = 0; i < x.rows(); ++i) out.row(i) = pathology_posterior(Eigen::VectorXd(x.row(i).transpose()), spec);
  return out;
}

namespace {

Eigen::VectorXd uniform_direction(Rng& rng, int dim) {
  Eigen::VectorXd v(dim);
  double norm = 0.0;
  do {
    for (int j = 0; j < dim; ++j) v(j) = rng.normal();
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

// Radius of a uniform point in {lo <= |x| <= hi}: density proportional to rho^(d-1).
double shell_radius(Rng& rng, double lo, double hi, int dim) {
  const double a = std::pow(lo, dim);
  const double b = std::pow(hi, dim);
  return std::pow(a + rng.uniform() * (b - a), 1.0 / dim);
}

}  // namespace

LabeledDataset sample_pathology(const PathologySpec& spec, Index n, std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("sample_pathology: n >= 1 required");
  Rng rng(seed);
  const double w_inner = spec.inner_mass();
  const double w_inner_middle = w_inner + spec.middle_mass();
  Eigen::MatrixXd x(n, spec.dim);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const double u = rng.uniform();
    double radius = 0.0;
    if (u < w_inner)
      radius = shell_radius(rng, 0.0, spec.r1, spec.dim);
    else if (u < w_inner_middle)
      radius = shell_radius(rng, spec.r2, 2 * spec.r2, spec.dim);
    else
      radius = shell_radius(rng, spec.r3, 2 * spec.r3, spec.dim);
    const Eigen::VectorXd point = radius * uniform_direction(rng, spec.dim);
    x.row(i) = point.transpose();

    const Eigen::VectorXd p = pathology_posterior(point, spec);
    const double v = rng.uniform();
    double cumulative = 0.0;
    int label = spec.k_classes;
    for (int k = 0; k < spec.k_classes; ++k) {
      cumulative += p(k);
      if (v < cumulative) {
        label = k + 1;
        break;
      }
    }
    y[static_cast<std::size_t>(i)] = label;
  }
  return LabeledDataset(std::move(x), std::move(y), spec.k_classes);
}

Distribution::Distribution(MixtureSpec spec) : v_(std::move(spec)) { std::get<MixtureSpec>(v_).validate(); }
Distribution::Distribution(PathologySpec spec) : v_(spec) { spec.validate(); }
Distribution::Distribution(EmpiricalSource source) : v_(std::move(source)) {}

int Distribution::k_classes() const {
  return std::visit(
      [](const auto& d) -> int {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, EmpiricalSource>)
          return d.data.k_classes();
        else
          return d.k_classes;
      },
      v_);
}

Index Distribution::dim() const {
  return std::visit(
      [](const auto& d) -> Index {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, EmpiricalSource>)
          return d.data.dim();
        else
          return d.dim;
      },
      v_);
}

std::string Distribution::name() const {
  if (const auto* m = std::get_if<MixtureSpec>(&v_))
    return "mixture:K=" + std::to_string(m->k_classes) + ":d=" + std::to_string(m->dim);
  if (const auto* p = std::get_if<PathologySpec>(&v_))
    return "pathology:beta=" + std::to_string(p->beta) + ":K=" + std::to_string(p->k_classes) +
           ":d=" + std::to_string(p->dim);
  return "empirical:n=" + std::to_string(std::get<EmpiricalSource>(v_).data.size());
}

LabeledDataset Distribution::sample_labeled(Index n, std::uint64_t seed) const {
  if (const auto* m = std::get_if<MixtureSpec>(&v_)) return confset::sample_labeled(*m, n, seed);
  if (const auto* p = std::get_if<PathologySpec>(&v_)) return sample_pathology(*p, n, seed);
  const auto& src = std::get<EmpiricalSource>(v_).data;
  if (n < 1) throw std::invalid_argument("sample_labeled: n >= 1 required");
  Rng rng(seed);
  Eigen::MatrixXd x(n, src.dim());
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const auto row = static_cast<Index>(rng.below(static_cast<std::uint64_t>(src.size())));
    x.row(i) = src.features().row(row);
    y[static_cast<std::size_t>(i)] = src.labels()[static_cast<std::size_t>(row)];
  }
  return LabeledDataset(std::move(x), std::move(y), src.k_classes());
}

UnlabeledDataset Distribution::sample_unlabeled(Index n, std::uint64_t seed) const {
  if (n < 0) throw std::invalid_argument("sample_unlabeled: N >= 0 required");
  if (n == 0) return UnlabeledDataset(Eigen::MatrixXd(0, dim()), dim());
  return UnlabeledDataset(sample_labeled(n, seed));
}

Eigen::MatrixXd Distribution::posterior(const Eigen::MatrixXd& x) const {
  if (const auto* m = std::get_if<MixtureSpec>(&v_)) return mixture_posterior(x, *m);
  if (const auto* p = std::get_if<PathologySpec>(&v_)) return pathology_posterior(x, *p);
  throw std::invalid_argument("distribution '" + name() + "' has no exact posterior");
}

}  // namespace confset
