#include <gtest/gtest.h>

#include "collmem/sweep.hpp"

namespace collmem {
namespace {

TEST(Sweep, DefaultGridOrderAndSize) {
    const SweepConfig config;
    EXPECT_EQ(config.point_count(), 500u);
    const auto rows = run_sweep(config, 2);
    ASSERT_EQ(rows.size(), 500u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_DOUBLE_EQ(rows[i].overlap, config.overlaps[i / 100]);
        EXPECT_EQ(rows[i].cycles, 1 + static_cast<int>(i % 100));
    }
}

TEST(Sweep, WorkerCountDoesNotChangeResults) {
    SweepConfig config;
    config.overlaps = {0.2, 0.6};
    config.n_min = 3;
    config.n_max = 30;
    const auto one = run_sweep(config, 1);
    const auto four = run_sweep(config, 4);
    ASSERT_EQ(one.size(), four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        EXPECT_EQ(one[i].fidelity, four[i].fidelity);
        EXPECT_EQ(one[i].conditional_fidelity, four[i].conditional_fidelity);
        EXPECT_EQ(one[i].herald, four[i].herald);
    }
}

TEST(Sweep, SinglePointEqualsEvaluate) {
    SweepConfig config;
    config.overlaps = {0.7};
    config.n_min = config.n_max = 40;
    config.theta = 0.9;
    const auto rows = run_sweep(config);
    ASSERT_EQ(rows.size(), 1u);
    const auto direct = evaluate(SequenceParams::for_rotation(0.7, 40, 0.9));
    EXPECT_EQ(rows[0].fidelity, direct.fidelity);
    EXPECT_EQ(rows[0].conditional_fidelity, direct.conditional_fidelity);
    EXPECT_EQ(rows[0].tau, direct.tau);
}

TEST(SweepConfig, JsonRoundTripAndDefaults) {
    const auto c = sweep_config_from_json(nlohmann::json::parse(
        R"({"overlaps": [0.25, 0.5], "N_range": [2, 9], "format": "json", "seed": 5, "output_path": "x.json"})"));
    EXPECT_EQ(c.overlaps, (std::vector<double>{0.25, 0.5}));
    EXPECT_EQ(c.n_min, 2);
    EXPECT_EQ(c.n_max, 9);
    EXPECT_EQ(c.format, OutputFormat::json);
    EXPECT_EQ(c.seed, 5u);
    EXPECT_DOUBLE_EQ(c.omega_g, 1.0);
    const auto back = sweep_config_from_json(sweep_config_to_json(c));
    EXPECT_EQ(back.overlaps, c.overlaps);
    EXPECT_EQ(back.n_max, c.n_max);
    EXPECT_EQ(back.output_path, c.output_path);
    EXPECT_EQ(back.format, c.format);
    EXPECT_EQ(sweep_config_from_json(nlohmann::json::object()).point_count(), 500u);
}

TEST(SweepConfig, Validation) {
    EXPECT_THROW(sweep_config_from_json(nlohmann::json::parse("[1]")), InvalidParameter);
    EXPECT_THROW(sweep_config_from_json(nlohmann::json::parse(R"({"N_range": [1]})")), InvalidParameter);
    EXPECT_THROW(sweep_config_from_json(nlohmann::json::parse(R"({"format": "xml"})")), InvalidParameter);
    SweepConfig c;
    c.overlaps = {1.0};
    EXPECT_THROW(run_sweep(c), InvalidParameter);
    c.overlaps = {};
    EXPECT_THROW(c.validate(), InvalidParameter);
    c = SweepConfig{};
    c.n_min = 5;
    c.n_max = 4;
    EXPECT_THROW(c.validate(), InvalidParameter);
    c = SweepConfig{};
    c.n_min = 0;
    EXPECT_THROW(c.validate(), InvalidParameter);
    EXPECT_EQ(parse_format("csv"), OutputFormat::csv);
}

}  // namespace
}  // namespace collmem
