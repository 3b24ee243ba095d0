#include "relcomp/sample.hpp"

#include "relcomp/error.hpp"

namespace relcomp {

void require_finite(const Sample& sample, const std::string& what) {
  if (!sample.allFinite()) {
    throw InvalidArgument(what + ": sample contains non-finite entries");
  }
}

Sample take_rows(const Sample& sample, std::size_t begin, std::size_t count) {
  const auto n = static_cast<std::size_t>(sample.rows());
  if (begin > n || count > n - begin) {
    throw InvalidArgument("take_rows: range [" + std::to_string(begin) + ", " +
                          std::to_string(begin + count) + ") exceeds " +
                          std::to_string(n) + " rows");
  }
  return sample.middleRows(static_cast<Eigen::Index>(begin),
                           static_cast<Eigen::Index>(count));
}

Sample stack_rows(const std::vector<const Sample*>& parts) {
  if (parts.empty()) return Sample(0, 0);
  const Eigen::Index d = parts.front()->cols();
  Eigen::Index rows = 0;
  for (const Sample* p : parts) {
    if (p->cols() != d) throw DimensionMismatch("stack_rows: column counts differ");
    rows += p->rows();
  }
  Sample out(rows, d);
  Eigen::Index at = 0;
  for (const Sample* p : parts) {
    out.middleRows(at, p->rows()) = *p;
    at += p->rows();
  }
  return out;
}

}  // namespace relcomp
