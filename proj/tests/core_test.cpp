// Copyright 2026 The ALGAS2 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "algas2/core.hpp"
#include "algas2/error.hpp"
#include "algas2/fls.hpp"
#include "algas2/interconnect.hpp"

namespace algas2::core {
namespace {

class CoreTest : public ::testing::Test {
 protected:
  CoreTest() : engine_(fls::DefaultEngineConfig()) {}

  CoreState Fresh() const { return CoreState::Initial(engine_); }

  fls::FlsEngine engine_;
  CoreParams params_;
};

HoaSample Sample(uint32_t lidar, uint32_t radar, bool lv = true,
                 bool rv = true) {
  HoaSample s;
  s.lidar_mm = lidar;
  s.radar_mm = radar;
  s.lidar_valid = lv;
  s.radar_valid = rv;
  return s;
}

TEST_F(CoreTest, FusionExamples) {
  auto out = SiuFuse(Sample(5000, 5000), Fresh(), params_.fusion);
  ASSERT_TRUE(out);
  EXPECT_EQ(out->fused_distance_raw, 500);
  EXPECT_EQ(out->health, Health::kNominal);

  out = SiuFuse(Sample(5000, 5040), Fresh(), params_.fusion);
  EXPECT_EQ(out->fused_distance_raw, 502);
  EXPECT_EQ(out->health, Health::kNominal);

  CoreState s = Fresh();
  s.Push(5000);  // prediction 5000 mm at zero rate
  out = SiuFuse(Sample(9000, 5020), s, params_.fusion);
  EXPECT_EQ(out->fused_distance_raw, 502);
  EXPECT_EQ(out->health, Health::kLidarSuspect);

  out = SiuFuse(Sample(5000, 0, true, false), Fresh(), params_.fusion);
  EXPECT_EQ(out->fused_distance_raw, 500);
  EXPECT_EQ(out->health, Health::kDegraded);

  EXPECT_FALSE(SiuFuse(Sample(1, 1, false, false), Fresh(), params_.fusion));
}

TEST_F(CoreTest, FusionSaturatesDistance) {
  auto out = SiuFuse(Sample(30000, 30000), Fresh(), params_.fusion);
  EXPECT_EQ(out->fused_distance_raw, 2047);
}

TEST_F(CoreTest, FusedDistanceStaysBetweenReadings) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<uint32_t> mm(0, 20000);
  std::uniform_int_distribution<int> small(-300, 300);
  for (int i = 0; i < 20000; ++i) {
    CoreState s = Fresh();
    const int n = rng() % 5;
    for (int k = 0; k < n; ++k) s.Push(mm(rng));
    s.prev_rate_raw = static_cast<int16_t>(small(rng));
    s.suspect = static_cast<Health>(rng() % 3);
    s.agree_streak = rng() % 60;
    const uint32_t lidar = mm(rng);
    const uint32_t radar =
        rng() % 2 ? mm(rng)
                  : static_cast<uint32_t>(std::max<int>(0, lidar + small(rng)));
    auto out = SiuFuse(Sample(lidar, radar), s, params_.fusion);
    ASSERT_TRUE(out);
    EXPECT_GE(out->fused_mm, std::min(lidar, radar));
    EXPECT_LE(out->fused_mm, std::max(lidar, radar));
    EXPECT_LE(out->fused_distance_raw, 2047);
    EXPECT_GE(out->closure_rate_raw, -512);
    EXPECT_LE(out->closure_rate_raw, 511);
  }
}

TEST_F(CoreTest, SuspectLatchNeedsSustainedAgreement) {
  CoreState s = Fresh();
  s.Push(5000);
  auto run = [&](uint32_t lidar, uint32_t radar) {
    auto out = SiuFuse(Sample(lidar, radar), s, params_.fusion);
    s.suspect = out->latched;
    s.agree_streak = out->agree_streak;
    s.Push(out->fused_mm);
    return *out;
  };
  EXPECT_EQ(run(9000, 5000).health, Health::kLidarSuspect);
  for (int k = 1; k < params_.fusion.recovery_steps; ++k) {
    const SiuOutput o = run(5100, 5000);
    EXPECT_EQ(o.health, Health::kLidarSuspect) << k;
    EXPECT_EQ(o.fused_mm, 5000);  // radar only while latched
  }
  const SiuOutput o = run(5100, 5000);
  EXPECT_EQ(o.health, Health::kNominal);
  EXPECT_EQ(o.fused_mm, 5050);
}

TEST(ClosureRateTest, BackwardDifference) {
  EXPECT_EQ(DeriveClosureRate(4990, 5000, 0.01), 100);  // 1 m/s closing
  EXPECT_EQ(DeriveClosureRate(5010, 5000, 0.01), -100);
  EXPECT_EQ(DeriveClosureRate(5000, 5000, 0.04), 0);
  EXPECT_EQ(DeriveClosureRate(0, 10000, 0.01), 511);
  EXPECT_EQ(DeriveClosureRate(10000, 0, 0.01), -512);
  EXPECT_EQ(DeriveClosureRate(4999, 5000, 0.04), 3);  // 2.5 cm/s rounds away
  EXPECT_THROW(DeriveClosureRate(1, 2, 0.0), Error);
}

TEST_F(CoreTest, ClosureRateUsesWindow) {
  CoreState s = Fresh();
  // 1 m/s descent sampled every 1 ms: 1 mm per step.
  for (int k = 0; k < 100; ++k) s.Push(8000 - k);
  auto out = SiuFuse(Sample(7900, 7900), s, params_.fusion);
  EXPECT_EQ(out->closure_rate_raw, 100);
}

std::vector<CornerDistance> Corners(std::array<int, 4> cm,
                                    std::array<bool, 4> use = {1, 1, 1, 1}) {
  std::vector<CornerDistance> v;
  for (int c = 0; c < 4; ++c) {
    if (use[c]) v.push_back({c, static_cast<uint16_t>(cm[c])});
  }
  return v;
}

TEST(IicuTest, FlatAndClosedForm) {
  const Geometry g;
  IicuEstimate e = IicuUpdate(Corners({700, 700, 700, 700}), g, {});
  EXPECT_EQ(e, (IicuEstimate{0, 0, Confidence::kFull}));

  // Front mean 0.20 m above rear: pitch = atan(0.2 / 1.0).
  e = IicuUpdate(Corners({620, 620, 600, 600}), g, {});
  EXPECT_EQ(e.pitch_mrad, 197);
  EXPECT_EQ(e.roll_mrad, 0);
  EXPECT_EQ(e.confidence, Confidence::kFull);
}

TEST(IicuTest, FourCornerFormulaOracle) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> cm(0, 2047);
  std::uniform_real_distribution<double> span(0.2, 2.0);
  for (int i = 0; i < 5000; ++i) {
    const std::array<int, 4> d = {cm(rng), cm(rng), cm(rng), cm(rng)};
    const Geometry g{span(rng), span(rng)};
    const double fl = d[0] / 100.0, fr = d[1] / 100.0, rl = d[2] / 100.0,
                 rr = d[3] / 100.0;
    const double pitch =
        std::atan(((fl + fr) / 2 - (rl + rr) / 2) / (2 * g.half_span_x_m));
    const double roll =
        std::atan(((fl + rl) / 2 - (fr + rr) / 2) / (2 * g.half_span_y_m));
    const IicuEstimate e = IicuUpdate(Corners(d), g, {});
    EXPECT_NEAR(e.pitch_mrad, pitch * 1000, 0.5 + 1e-9);
    EXPECT_NEAR(e.roll_mrad, roll * 1000, 0.5 + 1e-9);
  }
}

TEST(IicuTest, ThreeCornersOfAPlaneAgreeWithFour) {
  const Geometry g;
  const std::array<int, 4> plane = {520, 500, 480, 460};  // FL+RR == FR+RL
  const IicuEstimate full = IicuUpdate(Corners(plane), g, {});
  for (int drop = 0; drop < 4; ++drop) {
    std::array<bool, 4> use = {1, 1, 1, 1};
    use[drop] = false;
    const IicuEstimate e = IicuUpdate(Corners(plane, use), g, {});
    EXPECT_EQ(e.confidence, Confidence::kPartial);
    EXPECT_EQ(e.roll_mrad, full.roll_mrad);
    EXPECT_EQ(e.pitch_mrad, full.pitch_mrad);
  }
}

TEST(IicuTest, TooFewCornersKeepsPrevious) {
  const IicuEstimate prev{12, -34, Confidence::kFull};
  const IicuEstimate e =
      IicuUpdate(Corners({500, 600, 0, 0}, {1, 1, 0, 0}), Geometry{}, prev);
  EXPECT_EQ(e, (IicuEstimate{12, -34, Confidence::kNone}));
}

TEST(ThrustTrimTest, CornerSignPattern) {
  CoreParams p;
  p.k_trim = 1.0;
  const IicuEstimate e{10, 100, Confidence::kFull};
  EXPECT_EQ(ThrustTrim(kFrontLeft, e, p), 110);
  EXPECT_EQ(ThrustTrim(kFrontRight, e, p), 90);
  EXPECT_EQ(ThrustTrim(kRearLeft, e, p), -90);
  EXPECT_EQ(ThrustTrim(kRearRight, e, p), -110);
  p.trim_limit = 50;
  EXPECT_EQ(ThrustTrim(kFrontLeft, e, p), 50);
  EXPECT_EQ(ThrustTrim(kRearRight, e, p), -50);
  EXPECT_EQ(ThrustTrim(kFrontLeft, {10, 100, Confidence::kNone}, p), 0);
}

// One control step for all four cores, exchanging distances directly.
std::array<StepResult, 4> StepAll(const std::array<CoreState, 4> &states,
                                  const std::array<std::optional<SiuOutput>, 4> &siu,
                                  const std::array<std::optional<uint16_t>, 4> &prev_dist,
                                  const fls::FlsEngine &engine,
                                  const CoreParams &params, uint64_t step) {
  std::array<StepResult, 4> out;
  for (int c = 0; c < 4; ++c) {
    std::vector<interconnect::Received> inbox;
    for (int o = 0; o < 4; ++o) {
      if (o == c || !prev_dist[o] || step == 0) continue;
      inbox.push_back({{static_cast<uint8_t>(o), *prev_dist[o], step - 1}, 1});
    }
    out[c] = CoreStep(c, states[c], siu[c], inbox, engine, params, step);
  }
  return out;
}

TEST_F(CoreTest, IdenticalInputsGiveIdenticalCommands) {
  std::array<CoreState, 4> st;
  st.fill(Fresh());
  std::array<std::optional<uint16_t>, 4> prev{};
  for (uint64_t step = 0; step < 50; ++step) {
    std::array<std::optional<SiuOutput>, 4> siu;
    for (int c = 0; c < 4; ++c) {
      siu[c] = SiuFuse(Sample(9000 - 5 * step, 9000 - 5 * step), st[c],
                       params_.fusion);
    }
    auto r = StepAll(st, siu, prev, engine_, params_, step);
    for (int c = 1; c < 4; ++c) {
      EXPECT_EQ(r[c].command.descent_code, r[0].command.descent_code);
      EXPECT_EQ(r[c].command.thrust_trim, r[0].command.thrust_trim);
    }
    for (int c = 0; c < 4; ++c) {
      st[c] = r[c].next;
      prev[c] = r[c].outgoing->fused_distance_raw;
    }
  }
}

TEST_F(CoreTest, EmptyInboxStillCommands) {
  auto siu = SiuFuse(Sample(3000, 3000), Fresh(), params_.fusion);
  StepResult r = CoreStep(2, Fresh(), siu, {}, engine_, params_, 5);
  EXPECT_EQ(r.next.iicu.confidence, Confidence::kNone);
  EXPECT_EQ(r.command.thrust_trim, 0);
  EXPECT_EQ(r.command.source_core, 2);
  EXPECT_EQ(r.command.step, 5u);
  EXPECT_EQ(r.command.descent_code,
            engine_.OutputToCommand(engine_.EvaluateQuantized({300, 0}).raw));
  ASSERT_TRUE(r.outgoing);
  EXPECT_EQ(r.outgoing->fused_distance_raw, 300);
}

TEST_F(CoreTest, BlackoutHoldsLastCommand) {
  auto siu = SiuFuse(Sample(3000, 3000), Fresh(), params_.fusion);
  StepResult a = CoreStep(0, Fresh(), siu, {}, engine_, params_, 0);
  StepResult b = CoreStep(0, a.next, std::nullopt, {}, engine_, params_, 1);
  EXPECT_EQ(b.command.descent_code, a.command.descent_code);
  EXPECT_TRUE(b.command.degraded);
  EXPECT_FALSE(b.outgoing.has_value());
}

TEST_F(CoreTest, CommandsTrackReferenceWithinOneCode) {
  std::mt19937_64 rng(44);
  std::uniform_int_distribution<int> d0(0, 2047), d1(-512, 511);
  for (int i = 0; i < 5000; ++i) {
    SiuOutput siu;
    siu.fused_distance_raw = static_cast<uint16_t>(d0(rng));
    siu.closure_rate_raw = static_cast<int16_t>(d1(rng));
    siu.fused_mm = siu.fused_distance_raw * 10;
    const StepResult r = CoreStep(0, Fresh(), siu, {}, engine_, params_, 0);
    const double ref = fls::EvaluateReference(
                           engine_.config(), {double(siu.fused_distance_raw),
                                              double(siu.closure_rate_raw)})
                           .value;
    EXPECT_LE(std::fabs(r.command.descent_code - ref), 1.0)
        << siu.fused_distance_raw << "," << siu.closure_rate_raw;
  }
}

// Relabelings of the corners that preserve the airframe geometry: identity,
// left/right mirror, front/rear mirror and both.
constexpr std::array<std::array<int, 4>, 4> kKleinFour = {{
    {0, 1, 2, 3},
    {1, 0, 3, 2},
    {2, 3, 0, 1},
    {3, 2, 1, 0},
}};

TEST_F(CoreTest, SymmetryUnderCornerRelabeling) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> base(1000, 15000), jitter(-250, 250);
  for (int trial = 0; trial < 40; ++trial) {
    // Random per-corner sensor streams.
    const int steps = 60;
    std::vector<std::array<HoaSample, 4>> samples(steps);
    std::array<int, 4> start;
    for (int &s : start) s = base(rng);
    for (int k = 0; k < steps; ++k) {
      for (int c = 0; c < 4; ++c) {
        const int lidar = std::max(0, start[c] - 8 * k + jitter(rng) / 10);
        const int radar = std::max(0, lidar + jitter(rng));
        samples[k][c] = Sample(lidar, radar, rng() % 50 != 0, rng() % 50 != 0);
      }
    }
    auto simulate = [&](const std::array<int, 4> &perm) {
      std::array<CoreState, 4> st;
      st.fill(Fresh());
      std::array<std::optional<uint16_t>, 4> prev{};
      std::vector<std::array<CoreCommand, 4>> cmds;
      for (int k = 0; k < steps; ++k) {
        std::array<std::optional<SiuOutput>, 4> siu;
        // Core perm[c] sees what core c saw originally.
        for (int c = 0; c < 4; ++c) {
          siu[perm[c]] = SiuFuse(samples[k][c], st[perm[c]], params_.fusion);
        }
        auto r = StepAll(st, siu, prev, engine_, params_, k);
        std::array<CoreCommand, 4> row;
        for (int c = 0; c < 4; ++c) {
          st[c] = r[c].next;
          prev[c] = r[c].outgoing
                        ? std::optional<uint16_t>(r[c].outgoing->fused_distance_raw)
                        : std::nullopt;
          row[c] = r[c].command;
        }
        cmds.push_back(row);
      }
      return cmds;
    };
    const auto ref = simulate(kKleinFour[0]);
    for (const auto &perm : kKleinFour) {
      const auto got = simulate(perm);
      for (int k = 0; k < steps; ++k) {
        for (int c = 0; c < 4; ++c) {
          const CoreCommand &a = ref[k][c];
          const CoreCommand &b = got[k][perm[c]];
          EXPECT_EQ(a.descent_code, b.descent_code);
          EXPECT_EQ(a.thrust_trim, b.thrust_trim);
          EXPECT_EQ(a.degraded, b.degraded);
        }
      }
    }
  }
}

TEST_F(CoreTest, ResultsIndependentOfExecutionOrder) {
  std::mt19937_64 rng(8);
  std::array<CoreState, 4> st;
  st.fill(Fresh());
  for (int c = 0; c < 4; ++c) st[c].Push(4000 + 100 * c);
  std::array<std::optional<SiuOutput>, 4> siu;
  std::vector<interconnect::Received> inbox;
  for (int c = 0; c < 4; ++c) {
    siu[c] = SiuFuse(Sample(3990 + 100 * c, 4000 + 100 * c), st[c],
                     params_.fusion);
    inbox.push_back({{static_cast<uint8_t>(c), uint16_t(400 + 10 * c), 9}, 1});
  }
  std::array<StepResult, 4> in_order;
  for (int c = 0; c < 4; ++c) {
    in_order[c] = CoreStep(c, st[c], siu[c], inbox, engine_, params_, 10);
  }
  std::array<int, 4> order = {0, 1, 2, 3};
  for (int trial = 0; trial < 24; ++trial) {
    std::shuffle(order.begin(), order.end(), rng);
    for (int c : order) {
      const StepResult r = CoreStep(c, st[c], siu[c], inbox, engine_, params_, 10);
      EXPECT_EQ(r.command, in_order[c].command);
      EXPECT_EQ(r.next, in_order[c].next);
    }
  }
}

}  // namespace
}  // namespace algas2::core
