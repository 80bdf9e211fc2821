#include <doctest.h>

#include <vector>

#include "wmsim/rng.hpp"
#include "wmsim/trigger.hpp"

using namespace wmsim;

namespace {

// Inputs that defuzzify to exactly +100 / -100 under the default config.
RadioSample handover_sample() { return {100.0, 25.0, 90.0, 0}; }   // L/H/H -> H4
RadioSample hold_sample() { return {50.0, 5.0, 20.0, 0}; }         // H/L/L -> NH10

TriggerConfig default_cfg() { return TriggerConfig{}; }

}  // namespace

TEST_CASE("sample window evicts oldest first") {
  SampleWindow w(10);
  for (int i = 1; i <= 12; ++i) {
    double evicted = -1;
    bool had = w.push(i, &evicted);
    CHECK(had == (i > 10));
    if (i == 11) CHECK(evicted == doctest::Approx(1));
    if (i == 12) CHECK(evicted == doctest::Approx(2));
  }
  CHECK(w.oldest() == doctest::Approx(3));
  CHECK(w.newest() == doctest::Approx(12));
  CHECK(w.size() == 10);
  w.clear();
  CHECK(w.size() == 0);
}

TEST_CASE("fl-trend: full window of handover scores fires, 6 of 10 does not") {
  FlTrendTrigger full(default_cfg(), FuzzyConfig::defaults());
  double t = 0;
  for (int i = 0; i < 9; ++i) {
    CHECK(full.observe(handover_sample(), t) == TriggerDecision::Hold);
    t += 0.1;
  }
  CHECK(full.observe(handover_sample(), t) == TriggerDecision::Handover);

  FlTrendTrigger six(default_cfg(), FuzzyConfig::defaults());
  t = 0;
  for (int i = 0; i < 4; ++i, t += 0.1) six.observe(hold_sample(), t);
  for (int i = 0; i < 5; ++i, t += 0.1) six.observe(handover_sample(), t);
  // Window now holds 4 below + 6 above the cutoff: threshold 7 not reached.
  CHECK(six.observe(handover_sample(), t) == TriggerDecision::Hold);
  CHECK(six.count_above_cutoff() == 6);
}

TEST_CASE("fl-trend: no decision before the window warms up") {
  FlTrendTrigger trig(default_cfg(), FuzzyConfig::defaults());
  for (int i = 0; i < 3; ++i)
    CHECK(trig.observe(handover_sample(), 0.1 * i) == TriggerDecision::Hold);
  CHECK(trig.window().size() == 3);
}

TEST_CASE("fl-trend: incremental count matches a brute-force recount") {
  FlTrendTrigger trig(default_cfg(), FuzzyConfig::defaults());
  Rng rng(11);
  double t = 0;
  for (int i = 0; i < 500; ++i, t += 0.1) {
    RadioSample s{rng.uniform(40, 110), rng.uniform(0, 32), rng.uniform(0, 150), 0};
    trig.observe(s, t);
    int recount = 0;
    for (double v : trig.window().values())
      if (v > 0.0) ++recount;
    REQUIRE(trig.count_above_cutoff() == recount);
  }
}

TEST_CASE("suppression delay follows distance over speed") {
  TriggerConfig cfg = default_cfg();
  CHECK(compute_suppression_s(10.0, cfg) == doctest::Approx(36.0));
  CHECK(compute_suppression_s(30.0, cfg) == doctest::Approx(12.0));
  CHECK(compute_suppression_s(5.0, cfg) > compute_suppression_s(25.0, cfg));
  // A stationary node gets the configured cap.
  CHECK(compute_suppression_s(0.0, cfg) == doctest::Approx(cfg.suppression_max_s));
  CHECK(compute_suppression_s(0.1, 100.0, 120.0) == doctest::Approx(120.0));
}

TEST_CASE("fl-trend attach resets and suppresses") {
  FlTrendTrigger trig(default_cfg(), FuzzyConfig::defaults());
  double t = 0;
  for (int i = 0; i < 20; ++i, t += 0.1) trig.observe(handover_sample(), t);
  CHECK(trig.window().size() == 10);

  trig.on_attach(100.0, 10.0, 0.0);
  CHECK(trig.window().size() == 0);
  CHECK(trig.count_above_cutoff() == 0);
  CHECK(trig.iteration() == 0);
  CHECK(trig.suppression_until() == doctest::Approx(136.0));

  // Held while suppressed, regardless of how bad the link looks.
  for (t = 100.0; t < 136.0 - 1e-9; t += 0.1)
    REQUIRE(trig.observe(handover_sample(), t) == TriggerDecision::Hold);

  // After the delay the window must refill before a trigger can fire.
  int post = 0;
  TriggerDecision d = TriggerDecision::Hold;
  for (t = 136.0; d == TriggerDecision::Hold; t += 0.1) {
    d = trig.observe(handover_sample(), t);
    ++post;
  }
  CHECK(post == 10);

  // A second attach simply overrides the first.
  trig.on_attach(200.0, 10.0, 0.0);
  trig.on_attach(204.0, 30.0, 0.0);
  CHECK(trig.suppression_until() == doctest::Approx(216.0));
  CHECK(trig.window().size() == 0);
}

TEST_CASE("fl-trend travelled-distance suppression mode") {
  TriggerConfig cfg = default_cfg();
  cfg.suppression_mode = SuppressionDistanceMode::Travelled;
  FlTrendTrigger trig(cfg, FuzzyConfig::defaults());
  trig.on_attach(50.0, 10.0, 50.0);  // 50 m travelled at 10 km/h -> 18 s
  CHECK(trig.suppression_until() == doctest::Approx(68.0));
}

TEST_CASE("fl-trend magnitude mode gates on the window mean") {
  TriggerConfig cfg = default_cfg();
  cfg.trend_mode = TrendMode::Magnitude;
  FlTrendTrigger trig(cfg, FuzzyConfig::defaults());

  // Alternating +-100 keeps the mean at zero, below a threshold of 7.
  double t = 0;
  for (int i = 0; i < 40; ++i, t += 0.1)
    REQUIRE(trig.observe(i % 2 ? handover_sample() : hold_sample(), t) ==
            TriggerDecision::Hold);

  // A solid run of +100 lifts the mean past any small threshold.
  TriggerDecision d = TriggerDecision::Hold;
  for (int i = 0; i < 10; ++i, t += 0.1) d = trig.observe(handover_sample(), t);
  CHECK(d == TriggerDecision::Handover);
}

TEST_CASE("rssi threshold trigger is a pure level comparison") {
  RssiThresholdTrigger trig(default_cfg());
  CHECK(trig.observe({74.9, 10, 30, 0}, 1.0) == TriggerDecision::Hold);
  CHECK(trig.observe({75.0, 10, 30, 0}, 1.1) == TriggerDecision::Handover);
  CHECK(trig.observe({120.0, 10, 30, 0}, 1.2) == TriggerDecision::Handover);
  // Depends only on the sample: repeating the same input repeats the output.
  CHECK(trig.observe({74.9, 10, 30, 0}, 5.0) == TriggerDecision::Hold);
  CHECK(trig.observe({75.0, 10, 30, 0}, 5.1) == TriggerDecision::Handover);
}

TEST_CASE("rssi threshold trigger honours the post-attach blackout") {
  RssiThresholdTrigger trig(default_cfg());
  trig.on_attach(10.0, 10.0, 0.0);
  CHECK(trig.observe({120.0, 10, 30, 0}, 10.05) == TriggerDecision::Hold);
  CHECK(trig.observe({120.0, 10, 30, 0}, 10.2) == TriggerDecision::Handover);
}

TEST_CASE("change-of-rssi trigger compares window endpoints") {
  ChangeOfRssiTrigger flat(default_cfg());
  for (int i = 0; i < 50; ++i)
    REQUIRE(flat.observe({70.0, 10, 30, 0}, 0.1 * i) == TriggerDecision::Hold);

  ChangeOfRssiTrigger ramp(default_cfg());
  TriggerDecision last = TriggerDecision::Hold;
  for (int i = 0; i < 10; ++i)
    last = ramp.observe({60.0 + 20.0 * i / 9.0, 10, 30, 0}, 0.1 * i);
  CHECK(last == TriggerDecision::Handover);  // degraded by 20 dB >= 10 dB delta

  ChangeOfRssiTrigger improving(default_cfg());
  for (int i = 0; i < 10; ++i)
    last = improving.observe({80.0 - 20.0 * i / 9.0, 10, 30, 0}, 0.1 * i);
  CHECK(last == TriggerDecision::Hold);
}

TEST_CASE("fr threshold trigger is instantaneous") {
  FrThresholdTrigger trig(default_cfg());
  CHECK(trig.observe({60, 10, 30, 0}, 0.0) == TriggerDecision::Hold);
  CHECK(trig.observe({60, 10, 30, 2}, 0.1) == TriggerDecision::Hold);
  CHECK(trig.observe({60, 10, 30, 3}, 0.2) == TriggerDecision::Handover);
  CHECK(trig.observe({60, 10, 30, 9}, 0.3) == TriggerDecision::Handover);

  // One isolated spike amid quiet samples triggers on that sample exactly.
  FrThresholdTrigger spike(default_cfg());
  int fired_at = -1;
  for (int i = 0; i < 100; ++i) {
    int retrans = i == 57 ? 5 : 0;
    if (spike.observe({60, 10, 30, retrans}, 0.1 * i) == TriggerDecision::Handover) {
      CHECK(fired_at == -1);
      fired_at = i;
    }
  }
  CHECK(fired_at == 57);
}

TEST_CASE("isolated spikes trip the threshold trigger but never the trend") {
  TriggerConfig cfg = default_cfg();
  FlTrendTrigger trend(cfg, FuzzyConfig::defaults());
  RssiThresholdTrigger threshold(cfg);

  int trend_fires = 0, threshold_fires = 0;
  for (int i = 0; i < 600; ++i) {
    // One-sample spikes past the 75 dB limit, at least a window apart.
    bool spiky = i % 50 == 25;
    RadioSample s{spiky ? 95.0 : 55.0, 10.0, 20.0, 0};
    double t = 0.1 * i;
    if (trend.observe(s, t) == TriggerDecision::Handover) ++trend_fires;
    if (threshold.observe(s, t) == TriggerDecision::Handover) ++threshold_fires;
  }
  CHECK(threshold_fires >= 1);
  CHECK(trend_fires == 0);
}

TEST_CASE("fl-trend never re-fires inside the suppression window") {
  TriggerConfig cfg = default_cfg();
  const int streams = 300;
  for (int k = 0; k < streams; ++k) {
    Rng rng(1000 + k);
    FlTrendTrigger trig(cfg, FuzzyConfig::defaults());
    double t = 0;
    double earliest_allowed = 0;
    for (int i = 0; i < 400; ++i, t += 0.1) {
      RadioSample s{rng.uniform(45, 115), rng.uniform(0.5, 32), rng.uniform(0, 160), 0};
      if (trig.observe(s, t) == TriggerDecision::Handover) {
        REQUIRE(t >= earliest_allowed - 1e-9);
        double attach_at = t + rng.uniform(0.5, 3.0);
        trig.on_attach(attach_at, s.speed_kmph, 0.0);
        earliest_allowed = attach_at + compute_suppression_s(s.speed_kmph, cfg);
        t = attach_at;
      }
    }
  }
}

TEST_CASE("identical streams produce identical decisions") {
  Rng gen(777);
  std::vector<RadioSample> stream;
  for (int i = 0; i < 300; ++i)
    stream.push_back({gen.uniform(45, 110), gen.uniform(0, 30), gen.uniform(0, 150),
                      static_cast<int>(gen.uniform(0, 5))});

  for (TriggerAlgorithm alg :
       {TriggerAlgorithm::FlTrend, TriggerAlgorithm::RssiThreshold,
        TriggerAlgorithm::ChangeOfRssi, TriggerAlgorithm::FrThreshold}) {
    auto a = make_trigger(alg, default_cfg(), FuzzyConfig::defaults());
    auto b = make_trigger(alg, default_cfg(), FuzzyConfig::defaults());
    for (std::size_t i = 0; i < stream.size(); ++i) {
      double t = 0.1 * static_cast<double>(i);
      REQUIRE(a->observe(stream[i], t) == b->observe(stream[i], t));
    }
  }
}

TEST_CASE("trigger config validation") {
  TriggerConfig cfg = default_cfg();
  CHECK_NOTHROW(cfg.validate());
  cfg.threshold_count = 11;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = default_cfg();
  cfg.update_interval_s = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = default_cfg();
  cfg.change_window = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
