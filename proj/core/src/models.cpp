#include "relcomp/models.hpp"

#include "relcomp/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace relcomp {

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

void check_dim(const VectorRef& x, Eigen::Index d, const char* op) {
  if (x.size() != d) {
    throw DimensionMismatch(std::string(op) + ": point has dimension " + std::to_string(x.size()) +
                            ", model has " + std::to_string(d));
  }
}

Eigen::LLT<Matrix> factor(const GaussianSpec& spec) {
  Eigen::LLT<Matrix> llt(spec.covariance);
  if (llt.info() != Eigen::Success) throw InvalidArgument("gaussian: covariance is not SPD");
  return llt;
}

double log_det(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

// Per-component quantities shared by mixture density and score.
struct Component {
  Vector mean;
  Matrix precision;
  double log_norm;  // log w - d/2 log 2pi - 1/2 log det
};

std::vector<Component> prepare(const MixtureSpec& spec) {
  spec.validate();
  std::vector<Component> out;
  for (std::size_t k = 0; k < spec.components.size(); ++k) {
    const auto& g = spec.components[k];
    const auto llt = factor(g);
    const auto d = static_cast<double>(g.mean.size());
    out.push_back({g.mean, llt.solve(Matrix::Identity(g.mean.size(), g.mean.size())),
                   std::log(spec.weights(static_cast<Eigen::Index>(k))) -
                       0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * log_det(llt)});
  }
  return out;
}

Vector mixture_score_impl(const std::vector<Component>& comps, const VectorRef& x) {
  const auto m = comps.size();
  std::vector<double> logp(m);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m; ++k) {
    const Vector diff = x - comps[k].mean;
    logp[k] = comps[k].log_norm - 0.5 * diff.dot(comps[k].precision * diff);
    top = std::max(top, logp[k]);
  }
  double total = 0.0;
  for (double lp : logp) total += std::exp(lp - top);
  Vector score = Vector::Zero(x.size());
  for (std::size_t k = 0; k < m; ++k) {
    const double r = std::exp(logp[k] - top) / total;
    score -= r * (comps[k].precision * (x - comps[k].mean));
  }
  return score;
}

double mixture_log_density_impl(const std::vector<Component>& comps, const VectorRef& x) {
  double top = -std::numeric_limits<double>::infinity();
  std::vector<double> logp(comps.size());
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const Vector diff = x - comps[k].mean;
    logp[k] = comps[k].log_norm - 0.5 * diff.dot(comps[k].precision * diff);
    top = std::max(top, logp[k]);
  }
  double total = 0.0;
  for (double lp : logp) total += std::exp(lp - top);
  return top + std::log(total);
}

}  // namespace

GaussianSpec GaussianSpec::isotropic(Vector mean, double variance) {
  GaussianSpec spec;
  const auto d = mean.size();
  spec.mean = std::move(mean);
  spec.covariance = variance * Matrix::Identity(d, d);
  spec.validate();
  return spec;
}

void GaussianSpec::validate() const {
  if (mean.size() == 0) throw InvalidArgument("gaussian: mean must be non-empty");
  if (covariance.rows() != mean.size() || covariance.cols() != mean.size()) {
    throw DimensionMismatch("gaussian: covariance shape does not match the mean");
  }
  if (!mean.allFinite() || !covariance.allFinite()) {
    throw InvalidArgument("gaussian: parameters must be finite");
  }
  (void)factor(*this);
}

Vector gaussian_score(const GaussianSpec& spec, const VectorRef& x) {
  check_dim(x, spec.mean.size(), "gaussian_score");
  return -factor(spec).solve(x - spec.mean);
}

double gaussian_log_density(const GaussianSpec& spec, const VectorRef& x) {
  check_dim(x, spec.mean.size(), "gaussian_log_density");
  const auto llt = factor(spec);
  const Vector diff = x - spec.mean;
  const auto d = static_cast<double>(diff.size());
  return -0.5 * diff.dot(llt.solve(diff)) - 0.5 * d * std::log(2.0 * std::numbers::pi) -
         0.5 * log_det(llt);
}

Sample gaussian_sample(const GaussianSpec& spec, std::size_t n, std::uint64_t seed) {
  const auto llt = factor(spec);
  const Matrix L = llt.matrixL();
  const Eigen::Index d = spec.mean.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Sample out(static_cast<Eigen::Index>(n), d);
  Vector eps(d);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index k = 0; k < d; ++k) eps(k) = normal(rng);
    out.row(i) = (spec.mean + L * eps).transpose();
  }
  return out;
}

ScoreFunction make_gaussian_score(const GaussianSpec& spec) {
  spec.validate();
  const auto llt = factor(spec);
  Matrix precision = llt.solve(Matrix::Identity(spec.mean.size(), spec.mean.size()));
  precision = 0.5 * (precision + precision.transpose());
  return [mean = spec.mean, precision = std::move(precision)](const VectorRef& x) -> Vector {
    check_dim(x, mean.size(), "gaussian score");
    return -(precision * (x - mean));
  };
}

void MixtureSpec::validate() const {
  if (components.empty()) throw InvalidArgument("mixture: need at least one component");
  if (static_cast<std::size_t>(weights.size()) != components.size()) {
    throw InvalidArgument("mixture: one weight per component required");
  }
  if ((weights.array() <= 0.0).any() || !weights.allFinite()) {
    throw InvalidArgument("mixture: weights must be positive");
  }
  if (std::abs(weights.sum() - 1.0) > 1e-9) throw InvalidArgument("mixture: weights must sum to 1");
  const auto d = components.front().mean.size();
  for (const auto& c : components) {
    if (c.mean.size() != d) throw DimensionMismatch("mixture: components differ in dimension");
    c.validate();
  }
}

std::size_t MixtureSpec::dim() const {
  return components.empty() ? 0 : static_cast<std::size_t>(components.front().mean.size());
}

Vector mixture_score(const MixtureSpec& spec, const VectorRef& x) {
  check_dim(x, static_cast<Eigen::Index>(spec.dim()), "mixture_score");
  return mixture_score_impl(prepare(spec), x);
}

double mixture_log_density(const MixtureSpec& spec, const VectorRef& x) {
  check_dim(x, static_cast<Eigen::Index>(spec.dim()), "mixture_log_density");
  return mixture_log_density_impl(prepare(spec), x);
}

Sample mixture_sample(const MixtureSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  std::vector<Matrix> chol;
  for (const auto& c : spec.components) chol.push_back(factor(c).matrixL());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::discrete_distribution<std::size_t> pick(spec.weights.data(),
                                               spec.weights.data() + spec.weights.size());
  const auto d = static_cast<Eigen::Index>(spec.dim());
  Sample out(static_cast<Eigen::Index>(n), d);
  Vector eps(d);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const std::size_t k = pick(rng);
    for (Eigen::Index j = 0; j < d; ++j) eps(j) = normal(rng);
    out.row(i) = (spec.components[k].mean + chol[k] * eps).transpose();
  }
  return out;
}

ScoreFunction make_mixture_score(const MixtureSpec& spec) {
  auto comps = prepare(spec);
  const auto d = static_cast<Eigen::Index>(spec.dim());
  return [comps = std::move(comps), d](const VectorRef& x) -> Vector {
    check_dim(x, d, "mixture score");
    return mixture_score_impl(comps, x);
  };
}

MixtureSpec two_gaussian_mixture(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("two_gaussian_mixture: rho must lie in (0, 1)");
  MixtureSpec spec;
  spec.weights = Vector(2);
  spec.weights << rho, 1.0 - rho;
  spec.components.push_back(GaussianSpec::isotropic(Vector::Constant(1, 1.0)));
  spec.components.push_back(GaussianSpec::isotropic(Vector::Constant(1, -1.0)));
  return spec;
}

void GaussianRbmSpec::validate() const {
  if (B.rows() < 1 || B.cols() < 1) throw InvalidArgument("rbm: B must be at least 1 x 1");
  if (b.size() != B.rows() || c.size() != B.cols()) {
    throw DimensionMismatch("rbm: b must have d_y entries and c d_x entries");
  }
  if (!B.allFinite() || !b.allFinite() || !c.allFinite()) {
    throw InvalidArgument("rbm: parameters must be finite");
  }
}

Vector rbm_score(const GaussianRbmSpec& spec, const VectorRef& y) {
  check_dim(y, spec.B.rows(), "rbm_score");
  const Vector act = (spec.B.transpose() * y + spec.c).array().tanh().matrix();
  return spec.b - y + spec.B * act;
}

ScoreFunction make_rbm_score(const GaussianRbmSpec& spec) {
  spec.validate();
  return [spec](const VectorRef& y) -> Vector { return rbm_score(spec, y); };
}

Sample rbm_sample(const GaussianRbmSpec& spec, std::size_t n, std::uint64_t seed,
                  std::size_t gibbs_steps) {
  spec.validate();
  if (gibbs_steps < 1) throw InvalidArgument("rbm_sample: gibbs_steps must be at least 1");
  const Eigen::Index dy = spec.B.rows();
  const Eigen::Index dx = spec.B.cols();
  const auto chains = static_cast<Eigen::Index>(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // Rows are chains. Latents start uniform on {-1, 1}.
  Matrix latent(chains, dx);
  for (Eigen::Index i = 0; i < chains; ++i)
    for (Eigen::Index k = 0; k < dx; ++k) latent(i, k) = unif(rng) < 0.5 ? -1.0 : 1.0;

  Matrix visible(chains, dy);
  Matrix act(chains, dx);
  const Matrix Bt = spec.B.transpose();
  for (std::size_t step = 0; step < gibbs_steps; ++step) {
    // y | x ~ N(B x + b, I)
    visible.noalias() = latent * Bt;
    for (Eigen::Index i = 0; i < chains; ++i)
      for (Eigen::Index j = 0; j < dy; ++j) visible(i, j) += spec.b(j) + normal(rng);
    // x_k | y = +1 with probability 1 / (1 + exp(-2 a_k)), a = B^T y + c
    act.noalias() = visible * spec.B;
    for (Eigen::Index i = 0; i < chains; ++i) {
      for (Eigen::Index k = 0; k < dx; ++k) {
        const double a = act(i, k) + spec.c(k);
        const double p_up = 1.0 / (1.0 + std::exp(-2.0 * a));
        latent(i, k) = unif(rng) < p_up ? 1.0 : -1.0;
      }
    }
  }
  return visible;
}

GaussianRbmSpec random_rbm(std::size_t visible_dim, std::size_t latent_dim, std::uint64_t seed) {
  if (visible_dim < 1 || latent_dim < 1) throw InvalidArgument("random_rbm: dimensions must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin(0.5);
  GaussianRbmSpec spec;
  const auto dy = static_cast<Eigen::Index>(visible_dim);
  const auto dx = static_cast<Eigen::Index>(latent_dim);
  spec.B.resize(dy, dx);
  for (Eigen::Index i = 0; i < dy; ++i)
    for (Eigen::Index k = 0; k < dx; ++k) spec.B(i, k) = coin(rng) ? 1.0 : -1.0;
  spec.b.resize(dy);
  for (Eigen::Index i = 0; i < dy; ++i) spec.b(i) = normal(rng);
  spec.c.resize(dx);
  for (Eigen::Index k = 0; k < dx; ++k) spec.c(k) = normal(rng);
  return spec;
}

}  // namespace relcomp
