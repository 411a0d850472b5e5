// Copyright 2026 The sagdiv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "sagdiv/config.hpp"
#include "sagdiv/csv.hpp"
#include "sagdiv/error.hpp"
#include "sagdiv/persistence.hpp"
#include "sagdiv/report.hpp"
#include "sagdiv/scenarios.hpp"
#include "support.hpp"

namespace sagdiv {

// Readable parameter names in test listings.
void PrintTo(Method method, std::ostream* os) { *os << to_string(method); }

namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            ("sagdiv-" + std::string(info->test_suite_name()) + "-" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// std::stod rejects subnormals, which far-away predictions can produce.
double number(const std::string& text) {
  double value = std::numeric_limits<double>::quiet_NaN();
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  EXPECT_TRUE(ec == std::errc() && ptr == text.data() + text.size()) << text;
  return value;
}

CsvTable parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

template <typename F>
long ingestion_row(F&& f) {
  try {
    f();
  } catch (const IngestionError& e) {
    return e.row();
  }
  return -1;
}

// CSV ------------------------------------------------------------------------

TEST(Csv, QuotingFollowsRfc4180) {
  const auto t = parse("a,b,c\r\n\"x,1\",\"say \"\"hi\"\"\",plain\r\n\"multi\nline\",2,3\n");
  ASSERT_EQ(t.header.size(), 3u);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][0], "x,1");
  EXPECT_EQ(t.rows[0][1], "say \"hi\"");
  EXPECT_EQ(t.rows[0][2], "plain");
  EXPECT_EQ(t.rows[1][0], "multi\nline");
}

TEST(Csv, EscapeRoundTrip) {
  std::ostringstream out;
  write_csv_row(out, {"a,b", "q\"uote", "plain", ""});
  const auto t = parse("h1,h2,h3,h4\n" + out.str());
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][0], "a,b");
  EXPECT_EQ(t.rows[0][1], "q\"uote");
  EXPECT_EQ(csv_escape("plain"), "plain");
}

TEST(Csv, RaggedRowNamesRow) {
  EXPECT_EQ(ingestion_row([] { parse("a,b\n1,2\n3\n"); }), 3);
  EXPECT_GT(ingestion_row([] { parse("a,b\n\"open,2\n"); }), 0);
}

TEST(Csv, BlankLinesAreSkipped) {
  EXPECT_EQ(parse("a\n1\n\n2\n").rows.size(), 2u);
}

TEST(Csv, NumbersRoundTripWith17Digits) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unif(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = unif(rng) * std::pow(10.0, (i % 40) - 20);
    EXPECT_EQ(number(format_double(v)), v);
  }
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "NaN");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-Inf");
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Csv, DatasetColumnsInAnyOrder) {
  TempDir dir;
  write_text(dir / "d.csv", "y,z_1,x_0,z_0\n1.5,2,3,4\n-1,0.25,7e-1,8\n");
  const auto d = read_dataset_csv(dir / "d.csv");
  EXPECT_EQ(d.size(), 2);
  EXPECT_EQ(d.x()(1, 0), 0.7);
  EXPECT_EQ(d.z()(0, 0), 4.0);
  EXPECT_EQ(d.z()(0, 1), 2.0);
  EXPECT_EQ(d.y()(1), -1.0);
}

TEST(Csv, DatasetIngestionErrors) {
  TempDir dir;
  write_text(dir / "empty.csv", "");
  EXPECT_EQ(ingestion_row([&] { read_dataset_csv(dir / "empty.csv"); }), 1);
  write_text(dir / "header.csv", "x_0,z_0,y\n");
  EXPECT_EQ(ingestion_row([&] { read_dataset_csv(dir / "header.csv"); }), 2);
  write_text(dir / "text.csv", "x_0,z_0,y\n1,2,3\n4,five,6\n");
  EXPECT_EQ(ingestion_row([&] { read_dataset_csv(dir / "text.csv"); }), 3);
  write_text(dir / "ragged.csv", "x_0,z_0,y\n1,2,3\n4,5\n");
  EXPECT_EQ(ingestion_row([&] { read_dataset_csv(dir / "ragged.csv"); }), 3);
  write_text(dir / "gap.csv", "x_0,x_2,z_0,y\n1,2,3,4\n");
  EXPECT_EQ(ingestion_row([&] { read_dataset_csv(dir / "gap.csv"); }), 1);
  write_text(dir / "extra.csv", "x_0,z_0,y,w\n1,2,3,4\n");
  EXPECT_EQ(ingestion_row([&] { read_dataset_csv(dir / "extra.csv"); }), 1);
  write_text(dir / "blank.csv", "x_0,z_0,y\n1,,3\n");
  EXPECT_EQ(ingestion_row([&] { read_dataset_csv(dir / "blank.csv"); }), 2);
}

TEST(Csv, CovariateFiles) {
  TempDir dir;
  write_text(dir / "empty.csv", "");
  EXPECT_EQ(read_covariates_csv(dir / "empty.csv", 1).rows(), 0);
  write_text(dir / "header.csv", "x_0\n");
  const Matrix none = read_covariates_csv(dir / "header.csv", 1);
  EXPECT_EQ(none.rows(), 0);
  EXPECT_EQ(none.cols(), 1);
  write_text(dir / "two.csv", "x_0,x_1\n1,2\n");
  EXPECT_THROW(read_covariates_csv(dir / "two.csv", 1), InvalidInput);
}

TEST(Csv, DatasetWriteRead) {
  TempDir dir;
  const Dataset d(testing::normal_matrix(10, 2, 1), testing::normal_matrix(10, 3, 2),
                  testing::normal_vector(10, 3));
  write_dataset_csv(dir / "d.csv", d);
  const auto back = read_dataset_csv(dir / "d.csv");
  EXPECT_EQ(back.x(), d.x());
  EXPECT_EQ(back.z(), d.z());
  EXPECT_EQ(back.y(), d.y());
}

// Config ---------------------------------------------------------------------

TEST(Config, Defaults) {
  const auto cfg = parse_run_config(R"({"scenarios":[{"response":"sin"}],"methods":["kiv"]})");
  ASSERT_EQ(cfg.scenarios.size(), 1u);
  EXPECT_EQ(cfg.scenarios[0].outcome, OutcomeKind::Continuous);
  EXPECT_EQ(cfg.scenarios[0].response, Response::Sin);
  EXPECT_EQ(cfg.methods, std::vector<Method>{Method::KIV});
  EXPECT_EQ(cfg.repetitions, 1);
  EXPECT_EQ(cfg.budget, 3000);
  EXPECT_EQ(cfg.budget_name, "paper");
  EXPECT_FALSE(cfg.output_dir.has_value());
}

TEST(Config, FullDocument) {
  const auto cfg = parse_run_config(R"({
    "scenarios": [{"outcome": "binary", "response": "linear", "beta": 0.5}],
    "methods": ["zero", {"name": "sagdiv-kernel", "warmup": 50, "bound": 4, "learning_rate": 0.01,
                         "ratio_cap": 10, "ratio_basis": 100, "folds": 3}],
    "repetitions": 4, "seed": 12, "budget": "half", "stream_ratio": 3, "test_size": 200,
    "output_dir": "out", "record_timing": true, "threads": 2, "curves": false})");
  EXPECT_EQ(cfg.scenarios[0].beta, 0.5);
  EXPECT_EQ(cfg.budget, 1500);
  EXPECT_EQ(cfg.stream_ratio, 3);
  const auto& s = cfg.overrides.at(Method::SagdKernel);
  EXPECT_EQ(s.warmup, 50);
  EXPECT_EQ(s.bound, 4.0);
  EXPECT_EQ(*s.learning_rate, 0.01);
  EXPECT_EQ(s.ratio_basis, 100);
  EXPECT_EQ(s.folds, 3);
  const auto opts = cfg.run_options();
  EXPECT_EQ(opts.settings_for(Method::SagdKernel).stream_ratio, 3);
  EXPECT_EQ(opts.settings_for(Method::Zero).stream_ratio, 3);
  EXPECT_TRUE(opts.record_timing);
  EXPECT_FALSE(opts.emit_curves);
  EXPECT_EQ(*cfg.output_dir, fs::path("out"));
}

TEST(Config, SchemaErrorListsEveryProblem) {
  try {
    parse_run_config(R"({"scenarios":[{"response":"cubic","colour":1}],"methods":["kiv","kiv"],
                         "budget":"huge","mystery":true})");
    FAIL() << "expected a schema error";
  } catch (const SchemaError& e) {
    const std::string what = e.what();
    for (const char* key : {"mystery", "colour", "cubic", "budget", "methods[1]"}) {
      EXPECT_NE(what.find(key), std::string::npos) << key << " missing from: " << what;
    }
  }
}

TEST(Config, RejectsBadDocuments) {
  EXPECT_THROW(parse_run_config("not json"), SchemaError);
  EXPECT_THROW(parse_run_config("[]"), SchemaError);
  EXPECT_THROW(parse_run_config(R"({"scenarios":[],"methods":["kiv"]})"), SchemaError);
  EXPECT_THROW(parse_run_config(R"({"scenarios":[{"outcome":"binary","response":"step"}],"methods":["kiv"]})"),
               SchemaError);
  EXPECT_THROW(parse_run_config(R"({"scenarios":[{"response":"sin"}],"methods":[{"name":"kiv","warmup":-1}]})"),
               SchemaError);
  EXPECT_THROW(parse_run_config(R"({"scenarios":[{"response":"sin"}],"methods":["kiv"],"repetitions":"3"})"),
               SchemaError);
}

TEST(Config, HashTracksContent) {
  const auto a = parse_run_config(R"({"scenarios":[{"response":"sin"}],"methods":["kiv"]})");
  const auto b = parse_run_config(R"({ "methods":["kiv"], "scenarios":[{"response":"sin"}] })");
  const auto c = parse_run_config(R"({"scenarios":[{"response":"abs"}],"methods":["kiv"]})");
  EXPECT_EQ(a.hash, b.hash);
  EXPECT_NE(a.hash, c.hash);
}

TEST(Config, FitDocument) {
  const auto cfg = parse_fit_config(
      R"({"method":{"name":"sagdiv-kernel","warmup":20,"stream_ratio":3},"loss":{"kind":"logistic","beta":0.5},"seed":4})");
  EXPECT_EQ(cfg.method, Method::SagdKernel);
  EXPECT_EQ(cfg.settings.warmup, 20);
  EXPECT_EQ(cfg.settings.stream_ratio, 3);
  EXPECT_EQ(cfg.loss.kind(), LossKind::LogisticBCE);
  EXPECT_EQ(cfg.loss.scale(), 0.5);
  EXPECT_EQ(cfg.seed, 4u);
  EXPECT_THROW(parse_fit_config(R"({"method":"kiv","loss":{"kind":"hinge"}})"), SchemaError);
  EXPECT_THROW(parse_fit_config(R"({"method":"kiv","extra":1})"), SchemaError);
}

// Persistence ------------------------------------------------------------------

FittedModel fit_small(Method method, std::uint64_t seed) {
  ScenarioSpec spec;
  spec.response = Response::Sin;
  spec.sizes.baseline = 300;
  spec.seed = seed;
  const auto g = generate(spec);
  return fit_on_dataset(method, g.baseline_data, MethodSettings{}, LossSpec::quadratic(), FitSeeds{seed});
}

class RoundTrip : public ::testing::TestWithParam<Method> {};

TEST_P(RoundTrip, PredictionsSurviveSaveAndLoad) {
  const Method method = GetParam();
  const PersistedModel saved{method, fit_small(method, 5), Provenance{0xabcdef, 42}};
  TempDir dir;
  save_model(saved, dir / "model.json");
  const auto loaded = load_model(dir / "model.json");
  EXPECT_EQ(loaded.method, method);
  EXPECT_EQ(loaded.provenance.config_hash, 0xabcdefu);
  EXPECT_EQ(loaded.provenance.seed, 42u);
  const Matrix x = testing::normal_matrix(100, 1, 9) * 2.0;
  const Vector before = predict(saved.model, x);
  const Vector after = predict(loaded.model, x);
  EXPECT_LE((before - after).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(serialize_model(loaded), serialize_model(saved));
}

INSTANTIATE_TEST_SUITE_P(Methods, RoundTrip,
                         ::testing::Values(Method::SagdKernel, Method::SagdRawY, Method::TwoSLS,
                                           Method::KIV, Method::Naive, Method::Zero),
                         [](const auto& info) {
                           std::string name(to_string(info.param));
                           std::erase(name, '-');
                           return name;
                         });

TEST(Persistence, RejectsForeignDocuments) {
  EXPECT_THROW(deserialize_model("{}"), SchemaError);
  EXPECT_THROW(deserialize_model(R"({"format":"other","version":1})"), SchemaError);
  EXPECT_THROW(deserialize_model(R"({"format":"sagdiv-model","version":99,"method":"zero"})"), SchemaError);
  EXPECT_THROW(serialize_model(PersistedModel{Method::KIV, ZeroModel{}, {}}), InvalidInput);
}

// Commands -------------------------------------------------------------------

TEST(Commands, MinimalBench) {
  TempDir dir;
  const auto cfg =
      parse_run_config(R"({"scenarios":[{"response":"linear"}],"methods":["naive"],"budget":"half"})");
  ASSERT_EQ(cli::cmd_bench(cfg, dir / "out"), 0);
  for (const char* name : {"results.csv", "summary.json", "curves.csv"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / name)) << name;
  }
  EXPECT_FALSE(fs::exists(dir / "out" / "failures.log"));
  const auto table = read_csv(dir / "out" / "results.csv");
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.header[0], "scenario");
  EXPECT_EQ(table.rows[0][1], "naive");
  EXPECT_EQ(table.rows[0][5], "NA");
}

TEST(Commands, BenchIsByteIdenticalOnRerun) {
  TempDir dir;
  const auto cfg = parse_run_config(
      R"({"scenarios":[{"response":"abs"},{"outcome":"binary","response":"sin"}],
          "methods":["sagdiv-kernel","2sls","zero"],"repetitions":2,"budget":"half","seed":3})");
  ASSERT_EQ(cli::cmd_bench(cfg, dir / "a"), 0);
  auto threaded = cfg;
  threaded.threads = 2;
  ASSERT_EQ(cli::cmd_bench(threaded, dir / "b"), 0);
  for (const char* name : {"results.csv", "summary.json", "curves.csv"}) {
    EXPECT_EQ(read_text(dir / "a" / name), read_text(dir / "b" / name)) << name;
  }
  EXPECT_EQ(read_csv(dir / "a" / "results.csv").rows.size(), 2u * 2u * 3u);
}

TEST(Commands, BenchWritesFailureLog) {
  TempDir dir;
  const auto cfg = parse_run_config(
      R"({"scenarios":[{"response":"sin"}],"methods":[{"name":"sagdiv-kernel","warmup":100000},"zero"],
          "budget":"half"})");
  EXPECT_EQ(cli::cmd_bench(cfg, dir / "out"), 1);
  EXPECT_TRUE(fs::exists(dir / "out" / "failures.log"));
  const auto table = read_csv(dir / "out" / "results.csv");
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.rows[0][3], "NaN");
}

struct FitFixture {
  TempDir dir;
  Dataset data;

  FitFixture() : data(Matrix::Zero(1, 1), Matrix::Zero(1, 1), Vector::Zero(1)) {
    ScenarioSpec spec;
    spec.response = Response::Linear;
    spec.sizes.baseline = 450;
    spec.seed = 8;
    data = generate(spec).baseline_data;
    write_dataset_csv(dir / "train.csv", data);
    write_text(dir / "fit.json", R"({"method":"sagdiv-kernel","seed":6})");
  }
};

TEST(Commands, FitAndPredict) {
  FitFixture f;
  ASSERT_EQ(cli::cmd_fit(f.dir / "fit.json", f.dir / "train.csv", f.dir / "m1.json", std::nullopt), 0);
  ASSERT_EQ(cli::cmd_fit(f.dir / "fit.json", f.dir / "train.csv", f.dir / "m2.json", std::nullopt), 0);
  EXPECT_EQ(read_text(f.dir / "m1.json"), read_text(f.dir / "m2.json"));
  ASSERT_EQ(cli::cmd_fit(f.dir / "fit.json", f.dir / "train.csv", f.dir / "m3.json", 99), 0);
  EXPECT_NE(read_text(f.dir / "m1.json"), read_text(f.dir / "m3.json"));

  const auto loaded = load_model(f.dir / "m1.json");
  const auto& sagd = std::get<SAGDModel>(loaded.model);
  // Predict at the cached covariates.
  write_matrix_csv(f.dir / "train_x.csv", {"x_0"}, sagd.cached_x());
  ASSERT_EQ(cli::cmd_predict(f.dir / "m1.json", f.dir / "train_x.csv", f.dir / "p.csv"), 0);
  const auto table = read_csv(f.dir / "p.csv");
  ASSERT_EQ(table.header, (std::vector<std::string>{"x_0", "h_hat"}));
  ASSERT_EQ(static_cast<Index>(table.rows.size()), sagd.cached_x().rows());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    EXPECT_NEAR(number(table.rows[i][1]), sagd.cached_average()(static_cast<Index>(i)), 1e-10);
  }

  write_text(f.dir / "far.csv", "x_0\n100\n-100\n");
  ASSERT_EQ(cli::cmd_predict(f.dir / "m1.json", f.dir / "far.csv", f.dir / "far_out.csv"), 0);
  for (const auto& row : read_csv(f.dir / "far_out.csv").rows) {
    const double v = number(row[1]);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_LE(std::abs(v), sagd.bound());
  }

  write_text(f.dir / "none.csv", "");
  ASSERT_EQ(cli::cmd_predict(f.dir / "m1.json", f.dir / "none.csv", f.dir / "none_out.csv"), 0);
  EXPECT_EQ(read_text(f.dir / "none_out.csv"), "x_0,h_hat\n");

  write_text(f.dir / "wide.csv", "x_0,x_1\n1,2\n");
  EXPECT_THROW(cli::cmd_predict(f.dir / "m1.json", f.dir / "wide.csv", f.dir / "w.csv"), InvalidInput);
}

TEST(Commands, FitRejectsEmptyData) {
  FitFixture f;
  write_text(f.dir / "empty.csv", "");
  EXPECT_THROW(cli::cmd_fit(f.dir / "fit.json", f.dir / "empty.csv", f.dir / "m.json", std::nullopt),
               IngestionError);
  EXPECT_FALSE(fs::exists(f.dir / "m.json"));
}

#ifdef SAGDIV_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(SAGDIV_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Executable, ExitCodes) {
  FitFixture f;
  const std::string d = f.dir.path().string();
  EXPECT_EQ(run_cli("fit --config " + d + "/fit.json --data " + d + "/train.csv --out " + d + "/m.json"), 0);
  // Non-covariate columns are ignored, so the training file itself can be scored.
  EXPECT_EQ(run_cli("predict --model " + d + "/m.json --data " + d + "/train.csv --out " + d + "/p.csv"), 0);
  write_text(f.dir / "wide.csv", "x_0,x_1\n1,2\n");
  EXPECT_EQ(run_cli("predict --model " + d + "/m.json --data " + d + "/wide.csv --out " + d + "/p.csv"), 2);
  write_text(f.dir / "x.csv", "x_0\n0.5\n");
  EXPECT_EQ(run_cli("predict --model " + d + "/m.json --data " + d + "/x.csv --out " + d + "/p.csv --threads 2"), 0);
  write_text(f.dir / "bad.csv", "x_0,z_0,z_1,y\n1,2,3\n");
  EXPECT_EQ(run_cli("fit --config " + d + "/fit.json --data " + d + "/bad.csv --out " + d + "/m2.json"), 2);
  write_text(f.dir / "bad.json", R"({"scenarios":[],"methods":["kiv"],"typo":1})");
  EXPECT_EQ(run_cli("bench --config " + d + "/bad.json --out " + d + "/o"), 2);
  EXPECT_EQ(run_cli("bench --config " + d + "/missing.json --out " + d + "/o"), 2);
  EXPECT_NE(run_cli("frobnicate"), 0);
  write_text(f.dir / "ok.json",
             R"({"scenarios":[{"response":"sin"}],"methods":["zero"],"budget":"half","curves":false})");
  EXPECT_EQ(run_cli("bench --config " + d + "/ok.json --out " + d + "/o --seed 5"), 0);
  EXPECT_TRUE(fs::exists(f.dir / "o" / "results.csv"));
}
#endif

}  // namespace
}  // namespace sagdiv
