#pragma once

#include "relcomp/sample.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace relcomp {

/// splitmix64 step; used to derive independent per-model and per-trial seeds.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

// ---------------------------------------------------------------------------
// Gaussian

struct GaussianSpec {
  Vector mean;
  Matrix covariance;  ///< SPD

  static GaussianSpec isotropic(Vector mean, double variance = 1.0);
  void validate() const;
};

/// -Sigma^{-1} (x - mean).
Vector gaussian_score(const GaussianSpec& spec, const VectorRef& x);
double gaussian_log_density(const GaussianSpec& spec, const VectorRef& x);
Sample gaussian_sample(const GaussianSpec& spec, std::size_t n, std::uint64_t seed);
/// Score function with the factorization of the covariance precomputed.
ScoreFunction make_gaussian_score(const GaussianSpec& spec);

// ---------------------------------------------------------------------------
// Gaussian mixture

struct MixtureSpec {
  Vector weights;  ///< positive, sums to 1
  std::vector<GaussianSpec> components;

  void validate() const;
  std::size_t dim() const;
};

/// grad log sum_k w_k N_k(x), with responsibilities computed by log-sum-exp.
Vector mixture_score(const MixtureSpec& spec, const VectorRef& x);
double mixture_log_density(const MixtureSpec& spec, const VectorRef& x);
Sample mixture_sample(const MixtureSpec& spec, std::size_t n, std::uint64_t seed);
ScoreFunction make_mixture_score(const MixtureSpec& spec);

/// rho N(1, 1) + (1 - rho) N(-1, 1) on the real line.
MixtureSpec two_gaussian_mixture(double rho);

// ---------------------------------------------------------------------------
// Gaussian-Bernoulli RBM with latents in {-1, 1}^{d_x}:
//   p(y, x) ∝ exp(y^T B x + b^T y + c^T x - |y|^2 / 2)

struct GaussianRbmSpec {
  Matrix B;  ///< d_y x d_x
  Vector b;  ///< d_y
  Vector c;  ///< d_x

  void validate() const;
  std::size_t visible_dim() const { return static_cast<std::size_t>(B.rows()); }
  std::size_t latent_dim() const { return static_cast<std::size_t>(B.cols()); }
};

/// Marginal score of y: b - y + B tanh(B^T y + c).
Vector rbm_score(const GaussianRbmSpec& spec, const VectorRef& y);
ScoreFunction make_rbm_score(const GaussianRbmSpec& spec);

/// n independent blocked-Gibbs chains, each run for `gibbs_steps` sweeps from
/// a random latent state; the final visible state of each chain is one row.
Sample rbm_sample(const GaussianRbmSpec& spec, std::size_t n, std::uint64_t seed,
                  std::size_t gibbs_steps = 2000);

/// B uniform on {-1, 1}, b and c standard normal.
GaussianRbmSpec random_rbm(std::size_t visible_dim, std::size_t latent_dim, std::uint64_t seed);

}  // namespace relcomp
