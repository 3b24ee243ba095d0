#include "relcomp/problems.hpp"

#include "relcomp/error.hpp"
#include "relcomp/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace relcomp {

namespace {

constexpr double kPi = std::numbers::pi;

const std::map<std::string, ProblemParams>& registry() {
  static const std::map<std::string, ProblemParams> table = {
      {"mean_shift", {{"d", 10}, {"mu1", 0.5}, {"mu2", -0.5}}},
      {"mean_shift_l10", {{"d", 10}, {"shift", 0.5}, {"worse", 1.0}}},
      {"blobs",
       {{"grid", 4},
        {"spacing", 1.0},
        {"sd_major", 0.3},
        {"sd_minor", 0.1},
        {"ksd_bandwidth", 0.15},
        {"angle_r", kPi / 4},
        {"angle_p1", 3 * kPi / 4},
        {"angle_p2", kPi / 4 + kPi / 12}}},
      {"rbm",
       {{"dx", 5},
        {"dy", 20},
        {"epsilon", 1.0},
        {"p2", 0.3},
        {"delta_row", 0},
        {"delta_col", 0},
        {"gibbs_steps", 2000}}},
      {"rbm_l7",
       {{"dx", 5}, {"dy", 20}, {"epsilon", 0.18}, {"delta_row", 0}, {"delta_col", 0},
        {"gibbs_steps", 2000}}},
      {"mixture_tpr", {{"r", 0.5}, {"p1", 0.7}, {"p2", 0.75}, {"bandwidth", 1.0}}},
      {"rotating_gaussian",
       {{"epsilon", 0.5},
        {"angle_r", kPi / 4},
        {"angle_p2", 0.0},
        {"var_major", 4.0},
        {"var_minor", 0.25},
        {"bandwidth", 1.0}}},
  };
  return table;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

std::size_t as_count(const ProblemParams& p, const std::string& key, double min) {
  const double v = p.at(key);
  if (!(v >= min) || v != std::floor(v)) {
    throw InvalidArgument("problem parameter '" + key + "' must be an integer >= " +
                          std::to_string(static_cast<long>(min)));
  }
  return static_cast<std::size_t>(v);
}

CandidateSource gaussian_candidate(std::string name, const GaussianSpec& spec, double gap) {
  return {std::move(name),
          [spec](std::size_t n, std::uint64_t seed) { return gaussian_sample(spec, n, seed); },
          make_gaussian_score(spec), gap};
}

CandidateSource mixture_candidate(std::string name, const MixtureSpec& spec, double gap) {
  return {std::move(name),
          [spec](std::size_t n, std::uint64_t seed) { return mixture_sample(spec, n, seed); },
          make_mixture_score(spec), gap};
}

CandidateSource rbm_candidate(std::string name, const GaussianRbmSpec& spec, std::size_t steps,
                              double gap) {
  return {std::move(name),
          [spec, steps](std::size_t n, std::uint64_t seed) { return rbm_sample(spec, n, seed, steps); },
          make_rbm_score(spec), gap};
}

Matrix rotated(double angle, double var_major, double var_minor) {
  Matrix rot(2, 2);
  rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = var_major;
  diag(1, 1) = var_minor;
  return rot * diag * rot.transpose();
}

// Distance between two axis orientations (angles are mod pi).
double angle_gap(double a, double b) {
  double d = std::fmod(std::abs(a - b), kPi);
  return std::min(d, kPi - d);
}

MixtureSpec blob_mixture(int grid, double spacing, double angle, double sd_major, double sd_minor) {
  MixtureSpec spec;
  const int m = grid * grid;
  spec.weights = Vector::Constant(m, 1.0 / m);
  const Matrix cov = rotated(angle, sd_major * sd_major, sd_minor * sd_minor);
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      Vector mu(2);
      mu << i * spacing, j * spacing;
      spec.components.push_back({mu, cov});
    }
  }
  return spec;
}

GaussianRbmSpec perturbed(const GaussianRbmSpec& base, std::size_t row, std::size_t col, double eps) {
  GaussianRbmSpec out = base;
  out.B(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += eps;
  return out;
}

}  // namespace

std::vector<std::size_t> Problem::as_good() const {
  std::vector<std::size_t> out;
  if (candidates.empty()) return out;
  double best = candidates.front().gap;
  for (const auto& c : candidates) best = std::min(best, c.gap);
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    if (candidates[j].gap <= best + 1e-12) out.push_back(j);
  }
  return out;
}

std::vector<std::size_t> Problem::worse() const {
  const auto good = as_good();
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    if (std::find(good.begin(), good.end(), j) == good.end()) out.push_back(j);
  }
  return out;
}

std::vector<std::string> available_problems() {
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

ProblemParams default_params(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) {
    throw InvalidArgument("unknown problem '" + name + "'; available: " + join(available_problems()));
  }
  return it->second;
}

Problem make_problem(const std::string& name, const ProblemParams& overrides, std::uint64_t seed) {
  Problem prob;
  prob.name = name;
  prob.params = default_params(name);
  for (const auto& [key, value] : overrides) {
    if (!prob.params.count(key)) {
      std::vector<std::string> keys;
      for (const auto& [k, _] : prob.params) keys.push_back(k);
      throw InvalidArgument("problem '" + name + "' has no parameter '" + key + "'; valid: " + join(keys));
    }
    if (!std::isfinite(value)) throw InvalidArgument("problem parameter '" + key + "' must be finite");
    prob.params[key] = value;
  }
  const auto& p = prob.params;

  if (name == "mean_shift") {
    const auto d = as_count(p, "d", 1);
    prob.dim = d;
    const auto ref = GaussianSpec::isotropic(Vector::Zero(static_cast<Eigen::Index>(d)));
    prob.reference = [ref](std::size_t n, std::uint64_t s) { return gaussian_sample(ref, n, s); };
    int j = 1;
    for (const char* key : {"mu1", "mu2"}) {
      Vector mu = Vector::Zero(static_cast<Eigen::Index>(d));
      mu(0) = p.at(key);
      prob.candidates.push_back(gaussian_candidate("P" + std::to_string(j++),
                                                   GaussianSpec::isotropic(mu), std::abs(p.at(key))));
    }
  } else if (name == "mean_shift_l10") {
    const auto d = as_count(p, "d", 5);
    prob.dim = d;
    const auto ref = GaussianSpec::isotropic(Vector::Zero(static_cast<Eigen::Index>(d)));
    prob.reference = [ref](std::size_t n, std::uint64_t s) { return gaussian_sample(ref, n, s); };
    const double shift = p.at("shift");
    // +e1, -e1, +e2, -e2, ..., +e5: nine equally good models
    for (int k = 0; k < 9; ++k) {
      Vector mu = Vector::Zero(static_cast<Eigen::Index>(d));
      mu(k / 2) = (k % 2 == 0) ? shift : -shift;
      prob.candidates.push_back(gaussian_candidate("P" + std::to_string(k + 1),
                                                   GaussianSpec::isotropic(mu), std::abs(shift)));
    }
    Vector q = Vector::Zero(static_cast<Eigen::Index>(d));
    q(0) = p.at("worse");
    prob.candidates.push_back(gaussian_candidate("Q", GaussianSpec::isotropic(q), std::abs(p.at("worse"))));
  } else if (name == "blobs") {
    const auto grid = static_cast<int>(as_count(p, "grid", 1));
    const double spacing = p.at("spacing");
    const double sd_major = p.at("sd_major");
    const double sd_minor = p.at("sd_minor");
    if (!(spacing > 0 && sd_major > 0 && sd_minor > 0)) {
      throw InvalidArgument("blobs: spacing and standard deviations must be positive");
    }
    prob.dim = 2;
    prob.ksd_bandwidth = p.at("ksd_bandwidth");
    const auto ref = blob_mixture(grid, spacing, p.at("angle_r"), sd_major, sd_minor);
    prob.reference = [ref](std::size_t n, std::uint64_t s) { return mixture_sample(ref, n, s); };
    prob.candidates.push_back(mixture_candidate(
        "P1", blob_mixture(grid, spacing, p.at("angle_p1"), sd_major, sd_minor),
        angle_gap(p.at("angle_p1"), p.at("angle_r"))));
    prob.candidates.push_back(mixture_candidate(
        "P2", blob_mixture(grid, spacing, p.at("angle_p2"), sd_major, sd_minor),
        angle_gap(p.at("angle_p2"), p.at("angle_r"))));
  } else if (name == "rbm" || name == "rbm_l7") {
    const auto dx = as_count(p, "dx", 1);
    const auto dy = as_count(p, "dy", 1);
    const auto steps = as_count(p, "gibbs_steps", 1);
    const auto row = as_count(p, "delta_row", 0);
    const auto col = as_count(p, "delta_col", 0);
    if (row >= dy || col >= dx) throw InvalidArgument("rbm: perturbed entry lies outside B");
    prob.dim = dy;
    const auto base = random_rbm(dy, dx, derive_seed(seed, 0x7262));
    prob.reference = [base, steps](std::size_t n, std::uint64_t s) { return rbm_sample(base, n, s, steps); };
    std::vector<double> eps{p.at("epsilon")};
    if (name == "rbm") {
      eps.push_back(p.at("p2"));
    } else {
      for (double e : {0.2, 0.3, 0.35, 0.4, 0.45, 0.5}) eps.push_back(e);
    }
    for (std::size_t j = 0; j < eps.size(); ++j) {
      prob.candidates.push_back(rbm_candidate("P" + std::to_string(j + 1),
                                              perturbed(base, row, col, eps[j]), steps, std::abs(eps[j])));
    }
  } else if (name == "mixture_tpr") {
    prob.dim = 1;
    const auto ref = two_gaussian_mixture(p.at("r"));
    prob.reference = [ref](std::size_t n, std::uint64_t s) { return mixture_sample(ref, n, s); };
    prob.candidates.push_back(
        mixture_candidate("P1", two_gaussian_mixture(p.at("p1")), std::abs(p.at("p1") - p.at("r"))));
    prob.candidates.push_back(
        mixture_candidate("P2", two_gaussian_mixture(p.at("p2")), std::abs(p.at("p2") - p.at("r"))));
    prob.bandwidth = p.at("bandwidth");
  } else if (name == "rotating_gaussian") {
    prob.dim = 2;
    const double eps = p.at("epsilon");
    if (!(eps >= 0.0 && eps <= 1.0)) throw InvalidArgument("rotating_gaussian: epsilon must lie in [0, 1]");
    const double vmaj = p.at("var_major");
    const double vmin = p.at("var_minor");
    const double ar = p.at("angle_r");
    const double a2 = p.at("angle_p2");
    const double a1 = a2 + eps * (ar - a2);
    const GaussianSpec ref{Vector::Zero(2), rotated(ar, vmaj, vmin)};
    ref.validate();
    prob.reference = [ref](std::size_t n, std::uint64_t s) { return gaussian_sample(ref, n, s); };
    prob.candidates.push_back(gaussian_candidate("P1", {Vector::Zero(2), rotated(a1, vmaj, vmin)}, angle_gap(a1, ar)));
    prob.candidates.push_back(gaussian_candidate("P2", {Vector::Zero(2), rotated(a2, vmaj, vmin)}, angle_gap(a2, ar)));
    prob.bandwidth = p.at("bandwidth");
  }
  for (const auto& bw : {prob.bandwidth, prob.ksd_bandwidth}) {
    if (bw && !(*bw > 0.0)) throw InvalidArgument("problem bandwidth must be positive");
  }
  return prob;
}

TrialData draw_trial(const Problem& problem, DiscrepancyKind kind, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("draw_trial: n must be at least 2");
  TrialData out;
  out.reference = problem.reference(n, derive_seed(seed, 0));
  for (std::size_t j = 0; j < problem.candidates.size(); ++j) {
    const auto& c = problem.candidates[j];
    if (is_mmd(kind)) {
      out.models.emplace_back(SampleModel{c.sampler(n, derive_seed(seed, j + 1))});
    } else {
      out.models.emplace_back(DensityModel{c.score, problem.dim});
    }
  }
  return out;
}

std::vector<int> blob_cells(const Sample& sample, int grid, double spacing) {
  std::vector<int> cells(static_cast<std::size_t>(sample.rows()));
  for (Eigen::Index i = 0; i < sample.rows(); ++i) {
    const long cx = std::clamp(std::lround(sample(i, 0) / spacing), 0L, long(grid) - 1);
    const long cy = std::clamp(std::lround(sample(i, 1) / spacing), 0L, long(grid) - 1);
    cells[static_cast<std::size_t>(i)] = static_cast<int>(cx * grid + cy);
  }
  return cells;
}

}  // namespace relcomp
