#include <gtest/gtest.h>

#include <relcomp/error.hpp>
#include <relcomp/io.hpp>
#include <relcomp/models.hpp>

#include <json.hpp>

#include <cmath>
#include <sstream>

using namespace relcomp;
using nlohmann::json;

namespace {
Sample parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv_sample(in, "t.csv");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}
}  // namespace

TEST(Csv, ParsesRowsAndBlankLines) {
  const Sample s = parse("1,2\n\n 3.5 , -4e-1\n");
  ASSERT_EQ(s.rows(), 2);
  ASSERT_EQ(s.cols(), 2);
  EXPECT_DOUBLE_EQ(s(1, 0), 3.5);
  EXPECT_DOUBLE_EQ(s(1, 1), -0.4);
}

TEST(Csv, ErrorsNameTheLine) {
  EXPECT_NE(error_of("1,2\n3\n").find("t.csv:2"), std::string::npos);
  EXPECT_NE(error_of("1,2\n3,x\n").find("t.csv:2"), std::string::npos);
  EXPECT_NE(error_of("1,2,\n").find("t.csv:1"), std::string::npos);
  EXPECT_NE(error_of("nan\n").find("t.csv:1"), std::string::npos);
  EXPECT_NE(error_of("").find("no data"), std::string::npos);
}

TEST(Csv, RoundTrip) {
  const Sample s = gaussian_sample(GaussianSpec::isotropic(Vector::Zero(3)), 20, 1);
  std::ostringstream out;
  write_csv_sample(s, out);
  EXPECT_EQ(parse(out.str()), s);
}

TEST(DensityJson, Gaussian) {
  const auto m = parse_density_model(R"({"type":"gaussian","mean":[1,2],"covariance":[[1,0],[0,4]]})");
  EXPECT_EQ(m.dim, 2u);
  const Vector s = m.score(Vector::Zero(2));
  EXPECT_DOUBLE_EQ(s(0), 1.0);
  EXPECT_DOUBLE_EQ(s(1), 0.5);
}

TEST(DensityJson, MixtureAndRbm) {
  const auto mix = parse_density_model(
      R"({"type":"mixture","weights":[0.5,0.5],"components":[
          {"type":"gaussian","mean":[1],"covariance":[[1]]},
          {"type":"gaussian","mean":[-1],"covariance":[[1]]}]})");
  EXPECT_NEAR(mix.score(Vector::Zero(1))(0), 0.0, 1e-15);
  const auto rbm = parse_density_model(R"({"type":"rbm","B":[[0],[0]],"b":[1,2],"c":[0.5]})");
  EXPECT_EQ(rbm.dim, 2u);
  EXPECT_DOUBLE_EQ(rbm.score(Vector::Zero(2))(1), 2.0);
}

TEST(DensityJson, Errors) {
  EXPECT_THROW(parse_density_model("{"), InvalidArgument);
  EXPECT_THROW(parse_density_model(R"({"type":"cauchy"})"), InvalidArgument);
  EXPECT_THROW(parse_density_model(R"({"type":"gaussian","mean":[0]})"), InvalidArgument);
  EXPECT_THROW(parse_density_model(R"({"type":"gaussian","mean":[0,0],"covariance":[[1,0],[0]]})"),
               InvalidArgument);
  EXPECT_ANY_THROW(parse_density_model(R"({"type":"gaussian","mean":[0,0],"covariance":[[1,2],[2,1]]})"));
}

TEST(BenchPlanJson, TopLevelRunsAndOverrides) {
  const auto plan = parse_bench_plan(R"({
      "schema_version": 1, "problem": "mean_shift", "test": "relpair", "kind": "ksd",
      "n": 200, "trials": 5, "params": {"d": 3},
      "runs": [{"alpha": 0.1}, {"kind": "mmd"}],
      "sweep": {"param": "n", "values": [100, 200]}})",
                                     {{"seed", "9"}});
  ASSERT_EQ(plan.runs.size(), 2u);
  EXPECT_EQ(plan.runs[0].alpha, 0.1);
  EXPECT_EQ(plan.runs[0].kind, DiscrepancyKind::KsdComplete);
  EXPECT_EQ(plan.runs[1].kind, DiscrepancyKind::MmdComplete);
  EXPECT_EQ(plan.runs[1].params.at("d"), 3.0);
  EXPECT_EQ(plan.runs[1].seed, 9u);
  EXPECT_EQ(plan.runs[1].test, TestKind::RelPair);
  ASSERT_TRUE(plan.sweep);
  EXPECT_EQ(plan.sweep->values, (std::vector<double>{100, 200}));
}

TEST(BenchPlanJson, Rejections) {
  EXPECT_THROW(parse_bench_plan(R"({"schema_version": 2})"), InvalidArgument);
  EXPECT_THROW(parse_bench_plan(R"({"nonsense": 1})"), InvalidArgument);
  EXPECT_THROW(parse_bench_plan(R"({"test": "relpair", "problem": "mean_shift_l10"})"), InvalidArgument);
  EXPECT_THROW(parse_bench_plan(R"({"sweep": {"param": "bogus", "values": [1]}})"), InvalidArgument);
  EXPECT_THROW(parse_bench_plan(R"({"runs": [{"runs": []}]})"), InvalidArgument);
  EXPECT_THROW(parse_bench_plan("[1,2"), InvalidArgument);
}

TEST(ReportJson, ShapeAndInfinity) {
  const auto p = make_problem("mean_shift", {{"d", 2}});
  const auto t = draw_trial(p, DiscrepancyKind::MmdComplete, 100, 3);
  const auto k = KernelSpec::gaussian(1.0);
  const auto res = rel_psi(t.models, t.reference, k, DiscrepancyKind::MmdComplete, 0.05);
  auto report = make_report(res, {"a", "b"});
  report.bandwidth_rule = "fixed";
  const json j = json::parse(report_json(report));
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["test"], "relpsi");
  EXPECT_EQ(j["kernel"]["family"], "gaussian");
  EXPECT_EQ(j["kernel"]["bandwidth"], 1.0);
  EXPECT_EQ(j["models"].size(), 2u);
  EXPECT_EQ(j["decisions"].size(), 2u);
  const std::size_t sel = j["selected"];
  EXPECT_TRUE(j["statistics"][sel].is_null());
  const std::size_t other = 1 - sel;
  EXPECT_TRUE(j["statistics"][other].is_number());
  // l = 2: one side of the interval is unbounded
  const auto& iv = j["intervals"][other];
  EXPECT_TRUE(iv[0] == "-inf" || iv[1] == "inf");
  EXPECT_FALSE(report_table(report).empty());
}

TEST(MetricsCsv, HeaderAndRow) {
  EXPECT_EQ(metrics_csv_header(),
            "schema_version,problem,test,kind,n,alpha,rho,param_name,param_value,trials,tpr,tpr_se,fpr,fpr_se,"
            "fdr,fdr_se,reject_rate,reject_rate_se,nonfinite_trials");
  MetricsRow r;
  r.problem = "mean_shift";
  r.test = "relpair";
  r.kind = "mmd";
  r.n = 10;
  r.alpha = 0.05;
  r.summary = summarize({trial_rates({true, false}, {0, 1}, {})});
  std::ostringstream out;
  write_metrics_csv({r}, out);
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, metrics_csv_header());
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
  EXPECT_EQ(row.rfind("1,mean_shift,relpair,mmd,10,0.05,", 0), 0u);
}
