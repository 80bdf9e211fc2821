#include "wmsim/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace wmsim {

const char* to_string(FuzzyLabel label) {
  switch (label) {
    case FuzzyLabel::Low: return "Low";
    case FuzzyLabel::Medium: return "Medium";
    case FuzzyLabel::High: return "High";
  }
  return "?";
}

const char* to_string(FuzzyInput input) {
  switch (input) {
    case FuzzyInput::Rssi: return "rssi";
    case FuzzyInput::Speed: return "speed";
    case FuzzyInput::Distance: return "distance";
  }
  return "?";
}

FuzzyLabel fuzzy_label_from_string(const std::string& s) {
  if (s == "Low" || s == "low") return FuzzyLabel::Low;
  if (s == "Medium" || s == "medium") return FuzzyLabel::Medium;
  if (s == "High" || s == "high") return FuzzyLabel::High;
  throw std::invalid_argument("unknown fuzzy label: " + s);
}

std::string RuleOutput::to_string() const {
  return (cls == RuleClass::NotHandover ? "NH" : "H") + std::to_string(index);
}

RuleOutput RuleOutput::parse(const std::string& s) {
  RuleOutput out;
  std::size_t digits;
  if (s.size() >= 3 && s[0] == 'N' && s[1] == 'H') {
    out.cls = RuleClass::NotHandover;
    digits = 2;
  } else if (s.size() >= 2 && s[0] == 'H') {
    out.cls = RuleClass::Handover;
    digits = 1;
  } else {
    throw std::invalid_argument("unknown rule output: " + s);
  }
  out.index = std::stoi(s.substr(digits));
  int max_index = out.cls == RuleClass::NotHandover ? 13 : 14;
  if (out.index < 1 || out.index > max_index)
    throw std::invalid_argument("rule output index out of range: " + s);
  return out;
}

double membership_degree(const MembershipFunction& mf, double x) {
  if (x >= mf.b && x <= mf.c) return 1.0;
  if (x < mf.b) {
    if (mf.a == mf.b) return 1.0;  // left shoulder
    if (x <= mf.a) return 0.0;
    return (x - mf.a) / (mf.b - mf.a);
  }
  // x > c
  if (mf.c == mf.d) return 1.0;  // right shoulder
  if (x >= mf.d) return 0.0;
  return (mf.d - x) / (mf.d - mf.c);
}

const FuzzyVariable& FuzzyConfig::variable(FuzzyInput v) const {
  switch (v) {
    case FuzzyInput::Rssi: return rssi;
    case FuzzyInput::Speed: return speed;
    case FuzzyInput::Distance: return distance;
  }
  return rssi;
}

namespace {

void validate_variable(const FuzzyVariable& var) {
  std::ostringstream what;
  if (var.domain_lo >= var.domain_hi) {
    what << "fuzzy " << to_string(var.name) << ": empty domain";
    throw std::invalid_argument(what.str());
  }
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    if (!var.labels[i].valid()) {
      what << "fuzzy " << to_string(var.name) << "/"
           << to_string(static_cast<FuzzyLabel>(i))
           << ": breakpoints must satisfy a <= b <= c <= d";
      throw std::invalid_argument(what.str());
    }
  }
  // Coverage: every point of the declared domain must carry some degree.
  constexpr int kProbes = 512;
  for (int i = 0; i <= kProbes; ++i) {
    double x = var.domain_lo + (var.domain_hi - var.domain_lo) * i / kProbes;
    double best = 0;
    for (const auto& mf : var.labels) best = std::max(best, membership_degree(mf, x));
    if (best <= 0) {
      what << "fuzzy " << to_string(var.name) << ": no label covers x=" << x;
      throw std::invalid_argument(what.str());
    }
  }
}

}  // namespace

void FuzzyConfig::validate() const {
  validate_variable(rssi);
  validate_variable(speed);
  validate_variable(distance);

  std::set<std::array<int, 3>> antecedents;
  int nh = 0, h = 0;
  for (const auto& rule : rules) {
    if (rule.id < 1 || rule.id > 27)
      throw std::invalid_argument("rule id out of range");
    antecedents.insert({static_cast<int>(rule.rssi), static_cast<int>(rule.speed),
                        static_cast<int>(rule.distance)});
    (rule.output.cls == RuleClass::NotHandover ? nh : h)++;
  }
  if (antecedents.size() != kNumRules)
    throw std::invalid_argument("rule antecedents must be 27 distinct label triples");
  if (nh != 13 || h != 14)
    throw std::invalid_argument("rule matrix must hold 13 NotHandover and 14 Handover outputs");
}

FuzzyConfig FuzzyConfig::defaults() {
  FuzzyConfig cfg;

  // rssi is attenuation: High label = strong signal = low attenuation.
  // Breakpoints anchored to the 75 dB operating and 86 dB link-going levels.
  cfg.rssi.name = FuzzyInput::Rssi;
  cfg.rssi.domain_lo = 0;
  cfg.rssi.domain_hi = 140;
  cfg.rssi.labels[static_cast<std::size_t>(FuzzyLabel::High)] =
      MembershipFunction::left_shoulder(65, 75);
  cfg.rssi.labels[static_cast<std::size_t>(FuzzyLabel::Medium)] =
      MembershipFunction::trapezoid(65, 75, 75, 86);
  cfg.rssi.labels[static_cast<std::size_t>(FuzzyLabel::Low)] =
      MembershipFunction::right_shoulder(75, 86);

  // Walking vs running/driving ranges.
  cfg.speed.name = FuzzyInput::Speed;
  cfg.speed.domain_lo = 0;
  cfg.speed.domain_hi = 40;
  cfg.speed.labels[static_cast<std::size_t>(FuzzyLabel::Low)] =
      MembershipFunction::left_shoulder(8, 14);
  cfg.speed.labels[static_cast<std::size_t>(FuzzyLabel::Medium)] =
      MembershipFunction::trapezoid(8, 14, 16, 22);
  cfg.speed.labels[static_cast<std::size_t>(FuzzyLabel::High)] =
      MembershipFunction::right_shoulder(16, 22);

  // Cell scale of a 100 m coverage disk.
  cfg.distance.name = FuzzyInput::Distance;
  cfg.distance.domain_lo = 0;
  cfg.distance.domain_hi = 200;
  cfg.distance.labels[static_cast<std::size_t>(FuzzyLabel::Low)] =
      MembershipFunction::left_shoulder(30, 50);
  cfg.distance.labels[static_cast<std::size_t>(FuzzyLabel::Medium)] =
      MembershipFunction::trapezoid(30, 50, 60, 80);
  cfg.distance.labels[static_cast<std::size_t>(FuzzyLabel::High)] =
      MembershipFunction::right_shoulder(60, 80);

  struct Row {
    FuzzyLabel rssi, speed, distance;
    const char* out;
  };
  constexpr FuzzyLabel L = FuzzyLabel::Low, M = FuzzyLabel::Medium, H = FuzzyLabel::High;
  static const Row kTable[kNumRules] = {
      {H, H, H, "NH1"},  {H, M, H, "NH2"},  {H, L, H, "NH3"},
      {M, H, H, "H1"},   {M, M, H, "H2"},   {M, L, H, "H3"},
      {L, H, H, "H4"},   {L, M, H, "H5"},   {L, L, H, "H6"},
      {H, H, M, "NH4"},  {H, M, M, "NH5"},  {H, L, M, "NH6"},
      {M, H, M, "H7"},   {M, M, M, "H8"},   {M, L, M, "NH7"},
      {L, H, M, "H9"},   {L, M, M, "H10"},  {L, L, M, "H11"},
      {H, H, L, "NH8"},  {H, M, L, "NH9"},  {H, L, L, "NH10"},
      {M, H, L, "NH11"}, {M, M, L, "NH12"}, {M, L, L, "NH13"},
      {L, H, L, "H12"},  {L, M, L, "H13"},  {L, L, L, "H14"},
  };
  for (std::size_t i = 0; i < kNumRules; ++i) {
    cfg.rules[i] = Rule{static_cast<int>(i) + 1, kTable[i].rssi, kTable[i].speed,
                        kTable[i].distance, RuleOutput::parse(kTable[i].out)};
  }
  return cfg;
}

FuzzifiedInput fuzzify(const InputVector& in, const FuzzyConfig& cfg) {
  FuzzifiedInput out;
  const double raw[kNumInputs] = {in.rssi_db, in.speed_kmph, in.distance_m};
  for (std::size_t v = 0; v < kNumInputs; ++v) {
    const FuzzyVariable& var = cfg.variable(static_cast<FuzzyInput>(v));
    double x = raw[v];
    if (x < var.domain_lo || x > var.domain_hi) {
      x = std::clamp(x, var.domain_lo, var.domain_hi);
      out.clamped = true;
    }
    for (std::size_t l = 0; l < kNumLabels; ++l)
      out.degrees[v][l] = membership_degree(var.labels[l], x);
  }
  return out;
}

std::array<double, kNumRules> fire_rules(const FuzzifiedInput& degrees,
                                         const FuzzyConfig& cfg) {
  std::array<double, kNumRules> firing{};
  for (std::size_t i = 0; i < kNumRules; ++i) {
    const Rule& r = cfg.rules[i];
    double a = degrees.degree(FuzzyInput::Rssi, r.rssi);
    double b = degrees.degree(FuzzyInput::Speed, r.speed);
    double c = degrees.degree(FuzzyInput::Distance, r.distance);
    firing[i] = cfg.t_norm == TNorm::Min ? std::min({a, b, c}) : a * b * c;
  }
  return firing;
}

AggregateScores aggregate(const std::array<double, kNumRules>& firing,
                          const FuzzyConfig& cfg) {
  double nh_sq = 0, h_sq = 0;
  int nh_n = 0, h_n = 0;
  for (std::size_t i = 0; i < kNumRules; ++i) {
    if (cfg.rules[i].output.cls == RuleClass::NotHandover) {
      nh_sq += firing[i] * firing[i];
      ++nh_n;
    } else {
      h_sq += firing[i] * firing[i];
      ++h_n;
    }
  }
  if (cfg.aggregation == ScoreAggregation::RootMeanSquare) {
    if (nh_n > 0) nh_sq /= nh_n;
    if (h_n > 0) h_sq /= h_n;
  }
  return {std::sqrt(nh_sq), std::sqrt(h_sq)};
}

double defuzzify(double nh_score, double h_score) {
  if (nh_score <= 0 && h_score <= 0)
    throw IndeterminateScoreError(
        "indeterminate score: no rule fired, membership config leaves a coverage gap");
  double score = (-100.0 * nh_score + 100.0 * h_score) / (nh_score + h_score);
  // Guard the contract against one-ulp overshoot of the quotient.
  return std::clamp(score, -100.0, 100.0);
}

InferenceResult infer(const InputVector& in, const FuzzyConfig& cfg) {
  InferenceResult res;
  FuzzifiedInput degrees = fuzzify(in, cfg);
  res.input_clamped = degrees.clamped;
  res.firing = fire_rules(degrees, cfg);
  AggregateScores agg = aggregate(res.firing, cfg);
  res.nh_score = agg.nh_score;
  res.h_score = agg.h_score;
  res.score = defuzzify(res.nh_score, res.h_score);
  return res;
}

}  // namespace wmsim
