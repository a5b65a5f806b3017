#include <gtest/gtest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rilab/cli.hpp"

namespace fs = std::filesystem;
using rilab::cli::dispatch;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class TempDir {
public:
  TempDir() : path_(fs::temp_directory_path() / ("rilab_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }
  const fs::path& path() const { return path_; }

private:
  static inline int counter_ = 0;
  fs::path path_;
};

class ScopedEnv {
public:
  ScopedEnv(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    if (value) {
      ::setenv(name, value, 1);
    } else {
      ::unsetenv(name);
    }
  }
  ~ScopedEnv() {
    if (old_) {
      ::setenv(name_, old_->c_str(), 1);
    } else {
      ::unsetenv(name_);
    }
  }

private:
  const char* name_;
  std::optional<std::string> old_;
};

std::string first_data_line(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  return line;
}

}  // namespace

TEST(Cli, CapacityJson) {
  const auto r = run({"capacity", "--K", "origin", "--d", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j.at("value").get<double>(), 0.659463, 1e-6);
  EXPECT_EQ(j.at("method"), "exact_green");
  EXPECT_TRUE(j.at("r").is_null());
  EXPECT_NE(r.err.find("capacity"), std::string::npos);
}

TEST(Cli, InvalidDeltaNamesViolatedInequality) {
  const auto r = run({"verify", "--d", "3", "--N", "16", "--m", "4", "--delta", "2.2", "--runs", "10"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("2δ > d²/(d−1)"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"nonsense"}).code, 1);
  EXPECT_EQ(run({"capacity", "--bogus", "1"}).code, 1);
  EXPECT_EQ(run({"capacity", "--help"}).code, 0);
  EXPECT_EQ(run({"capacity", "--method", "fancy"}).code, 1);
}

TEST(Cli, ConfigRejectsUnknownKey) {
  TempDir dir;
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"N": 9, "colour": "blue"})";
  const auto r = run({"simulate", "--config", cfg.string(), "--runs", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("colour"), std::string::npos) << r.err;
}

TEST(Cli, SeedPrecedence) {
  TempDir dir;
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"N": 9, "m": 3, "seed": 11})";
  const std::vector<std::string> base{"verify", "--runs", "50", "--K", "origin"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    const auto r = run(a);
    EXPECT_EQ(r.err.find("error"), std::string::npos) << r.err;
    return first_data_line(r.out);
  };
  auto seed_of = [](const std::string& line) { return line.substr(line.rfind(',') + 1); };
  {
    ScopedEnv env("LAB_SEED", "7");
    EXPECT_EQ(seed_of(with({"--N", "9", "--m", "3"})), "7");
    EXPECT_EQ(seed_of(with({"--config", cfg.string()})), "11");
    EXPECT_EQ(seed_of(with({"--config", cfg.string(), "--seed", "13"})), "13");
    EXPECT_EQ(seed_of(with({"--config", cfg.string(), "--set", "seed=12"})), "12");
  }
  {
    ScopedEnv env("LAB_SEED", nullptr);
    EXPECT_EQ(seed_of(with({"--N", "9", "--m", "3"})), "1");
  }
  {
    ScopedEnv env("LAB_SEED", "abc");
    EXPECT_EQ(run({"verify", "--N", "9", "--m", "3", "--runs", "5"}).code, 1);
  }
}

TEST(Cli, VerifyCsvColumns) {
  const auto r = run({"verify", "--N", "9", "--m", "3", "--runs", "100", "--seed", "3"});
  ASSERT_NE(r.code, 1) << r.err;
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "experiment,d,N,m,A,delta,zeta,C1,K_id,x,runs,lhs,stderr,rhs,gap,z,seed");
}

TEST(Cli, OutputFileIsAtomicAndComplete) {
  TempDir dir;
  const auto out = dir / "run.csv";
  const auto r = run({"simulate", "--N", "9", "--m", "3", "--runs", "20", "--output", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto text = slurp(out);
  EXPECT_EQ(text.rfind("run,exit_time,stretches,scaled_stretches,hit_mask\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 21);
  for (const auto& entry : fs::directory_iterator(dir.path())) EXPECT_EQ(entry.path(), out);
  EXPECT_EQ(run({"simulate", "--N", "9", "--m", "3", "--runs", "2", "--output", (dir / "no/such/dir.csv").string()}).code, 1);
}

TEST(Cli, WorkerCountDoesNotChangeBytes) {
  TempDir dir;
  for (const std::string sub : {"verify", "simulate", "stretches", "lerw"}) {
    std::vector<std::string> args{sub, "--N", "9", "--m", "3", "--runs", "60", "--seed", "5"};
    auto a1 = args;
    a1.insert(a1.end(), {"--workers", "1", "--output", (dir / (sub + "1")).string()});
    auto a4 = args;
    a4.insert(a4.end(), {"--workers", "4", "--output", (dir / (sub + "4")).string()});
    ASSERT_NE(run(a1).code, 1) << sub;
    ASSERT_NE(run(a4).code, 1) << sub;
    EXPECT_EQ(slurp(dir / (sub + "1")), slurp(dir / (sub + "4"))) << sub;
  }
}

TEST(Cli, MarginalsExactMap) {
  const auto r = run({"marginals", "--K", "pair"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  double total = 0;
  for (const auto& [k, v] : j.items()) total += v.get<double>();
  EXPECT_NEAR(total, 1.0, 1e-5);
  EXPECT_NEAR(j.at("0").get<double>(), 0.337046, 2e-6);
  EXPECT_NEAR(j.at("3").get<double>(), 0.411029, 2e-6);
}

TEST(Cli, Sigma1AndLerwRun) {
  EXPECT_EQ(run({"sigma1", "--d", "3"}).code, 0);
  EXPECT_EQ(run({"sigma1", "--lambda", "1.0"}).code, 0);
  const auto l = run({"lerw", "--N", "8", "--m", "2", "--runs", "3", "--index", "dense"});
  ASSERT_EQ(l.code, 0) << l.err;
  EXPECT_EQ(l.out.rfind("d,L,seed,gen_len,lerw_len,visited,store_probes\n", 0), 0u);
}
