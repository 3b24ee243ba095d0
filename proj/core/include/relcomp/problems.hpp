#pragma once

#include "relcomp/comparison.hpp"
#include "relcomp/discrepancy.hpp"
#include "relcomp/sample.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace relcomp {

using Sampler = std::function<Sample(std::size_t n, std::uint64_t seed)>;
using ProblemParams = std::map<std::string, double>;

struct CandidateSource {
  std::string name;
  Sampler sampler;
  ScoreFunction score;
  /// Population distance proxy to the reference; smaller is better. Ground
  /// truth sets are derived from it.
  double gap = 0.0;
};

struct Problem {
  std::string name;
  ProblemParams params;  ///< defaults merged with overrides
  std::size_t dim = 0;
  Sampler reference;
  std::vector<CandidateSource> candidates;
  std::optional<double> bandwidth;  ///< fixed bandwidth; median heuristic when empty
  std::optional<double> ksd_bandwidth;  ///< overrides `bandwidth` for KSD kinds

  /// Models as good as the best (minimal gap).
  std::vector<std::size_t> as_good() const;
  /// Models strictly worse than the best.
  std::vector<std::size_t> worse() const;
};

std::vector<std::string> available_problems();
ProblemParams default_params(const std::string& name);
/// Unknown names and unknown parameter keys throw InvalidArgument with the valid choices.
Problem make_problem(const std::string& name, const ProblemParams& overrides = {},
                     std::uint64_t seed = 0);

struct TrialData {
  Sample reference;
  std::vector<CandidateModel> models;
};

/// Draws the reference sample and instantiates candidates for `kind`: samples
/// of n rows for MMD kinds, score functions for KSD kinds. Reference and
/// candidate samplers get independent seeds derived from `seed`.
TrialData draw_trial(const Problem& problem, DiscrepancyKind kind, std::size_t n, std::uint64_t seed);

/// Index of the nearest blob centre for each row (x * grid + y).
std::vector<int> blob_cells(const Sample& sample, int grid, double spacing);

}  // namespace relcomp
