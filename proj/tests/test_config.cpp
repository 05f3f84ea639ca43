#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "mtrl/config.hpp"
#include "mtrl/error.hpp"

using namespace mtrl;

TEST(Config, DefaultsAreValid) {
  const SweepConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.n_grid.size(), 30u);
  EXPECT_EQ(c.n_grid.front(), 5);
  EXPECT_EQ(c.T_grid.back(), 150);
  EXPECT_DOUBLE_EQ(c.input_radius_or_default(), std::sqrt(50.0));
}

TEST(Config, GridForms) {
  SweepConfig c;
  apply_setting(c, "n_grid", "5,15, 30,60");
  EXPECT_EQ(c.n_grid, (std::vector<Index>{5, 15, 30, 60}));
  apply_setting(c, "T_grid", "10:40:10");
  EXPECT_EQ(c.T_grid, (std::vector<Index>{10, 20, 30, 40}));
  EXPECT_THROW(apply_setting(c, "T_grid", "10:40"), InvalidParameter);
  EXPECT_THROW(apply_setting(c, "T_grid", "10:5:1"), InvalidParameter);
  EXPECT_THROW(apply_setting(c, "n_grid", "5,x"), InvalidParameter);
}

TEST(Config, ScalarParsing) {
  SweepConfig c;
  apply_setting(c, "noise_std", "0.25");
  apply_setting(c, "record_timing", "yes");
  apply_setting(c, "master_seed", "18446744073709551615");
  apply_setting(c, "max_iters", "0");
  apply_setting(c, "input_radius", "1.5");
  EXPECT_DOUBLE_EQ(c.noise_std, 0.25);
  EXPECT_TRUE(c.record_timing);
  EXPECT_EQ(c.master_seed, 18446744073709551615ULL);
  EXPECT_EQ(c.optimizer.max_iters, 0);
  EXPECT_DOUBLE_EQ(c.input_radius_or_default(), 1.5);
  apply_setting(c, "input_radius", "default");
  EXPECT_FALSE(c.input_radius.has_value());
  EXPECT_THROW(apply_setting(c, "noise_std", "0.2.5"), InvalidParameter);
  EXPECT_THROW(apply_setting(c, "trials", "3.5"), InvalidParameter);
  EXPECT_THROW(apply_setting(c, "record_timing", "maybe"), InvalidParameter);
  EXPECT_THROW(apply_setting(c, "no_such_key", "1"), InvalidParameter);
}

TEST(Config, ValidationRejectsBadValues) {
  auto rejects = [](const char* key, const char* value) {
    SweepConfig c;
    apply_setting(c, key, value);
    EXPECT_THROW(c.validate(), InvalidParameter) << key << "=" << value;
  };
  rejects("k_true", "51");
  rejects("k_model", "0");
  rejects("trials", "0");
  rejects("noise_std", "-1");
  rejects("workers", "0");
  rejects("phase_delta", "1");
  rejects("sim_delta", "0");
  rejects("step0", "0");
  rejects("n_grid", "0,5");
}

TEST(Config, MarginPolicy) {
  SweepConfig c;
  c.k_model = 2;
  EXPECT_NEAR(c.margin(50), 2.0 * std::sqrt(2.0 / 50.0), 1e-15);
  apply_setting(c, "margin_policy", "two_over_eps");
  EXPECT_NEAR(c.margin(50), 2.0 / std::sqrt(2.0 / 50.0), 1e-12);
  EXPECT_THROW(apply_setting(c, "margin_policy", "other"), InvalidParameter);
}

TEST(Config, DumpLoadRoundTrip) {
  SweepConfig c;
  apply_setting(c, "n_grid", "3,9");
  apply_setting(c, "noise_std", "0.1");
  apply_setting(c, "phase_delta", "0.000123");
  apply_setting(c, "margin_policy", "two_over_eps");
  apply_setting(c, "out_dir", "some/dir");
  const std::string text = dump_config(c);
  const auto path = std::filesystem::temp_directory_path() / "mtrl_config_roundtrip.cfg";
  {
    std::ofstream out(path);
    out << "# saved\n\n" << text;
  }
  SweepConfig back;
  load_config_file(back, path);
  std::filesystem::remove(path);
  EXPECT_EQ(dump_config(back), text);
  for (const auto& key : config_keys())
    EXPECT_NE(text.find(key + "="), std::string::npos) << key;
}

TEST(Config, FileErrors) {
  SweepConfig c;
  EXPECT_THROW(load_config_file(c, "/nonexistent/mtrl.cfg"), InvalidInput);
  const auto path = std::filesystem::temp_directory_path() / "mtrl_config_bad.cfg";
  {
    std::ofstream out(path);
    out << "d = 10  # comment\njust text\n";
  }
  EXPECT_THROW(load_config_file(c, path), InvalidParameter);
  EXPECT_EQ(c.d, 10);
  std::filesystem::remove(path);
}
