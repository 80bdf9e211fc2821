#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace wmsim {

// ---------------------------------------------------------------------------
// Fuzzy handover scoring: fuzzify (attenuation, speed, distance) readings,
// fire a 27-rule matrix, aggregate the two rule families, and collapse to a
// bipolar score in [-100, 100] where positive means "hand over".
// ---------------------------------------------------------------------------

enum class FuzzyLabel { Low = 0, Medium = 1, High = 2 };
enum class FuzzyInput { Rssi = 0, Speed = 1, Distance = 2 };

constexpr std::size_t kNumLabels = 3;
constexpr std::size_t kNumInputs = 3;
constexpr std::size_t kNumRules = 27;

const char* to_string(FuzzyLabel label);
const char* to_string(FuzzyInput input);
FuzzyLabel fuzzy_label_from_string(const std::string& s);

// Trapezoid over [a,d] with plateau [b,c]. a==b makes a left shoulder
// (degree 1 for all x <= c), c==d a right shoulder (degree 1 for x >= c).
struct MembershipFunction {
  double a = 0, b = 0, c = 0, d = 0;

  static MembershipFunction trapezoid(double a, double b, double c, double d) {
    return {a, b, c, d};
  }
  static MembershipFunction left_shoulder(double c, double d) { return {c, c, c, d}; }
  static MembershipFunction right_shoulder(double a, double b) { return {a, b, b, b}; }

  bool valid() const { return a <= b && b <= c && c <= d; }
};

double membership_degree(const MembershipFunction& mf, double x);

struct FuzzyVariable {
  FuzzyInput name = FuzzyInput::Rssi;
  double domain_lo = 0;
  double domain_hi = 1;
  std::array<MembershipFunction, kNumLabels> labels;  // indexed by FuzzyLabel

  const MembershipFunction& mf(FuzzyLabel l) const {
    return labels[static_cast<std::size_t>(l)];
  }
};

enum class RuleClass { NotHandover, Handover };

struct RuleOutput {
  RuleClass cls = RuleClass::NotHandover;
  int index = 1;  // NH1..NH13 or H1..H14

  std::string to_string() const;
  static RuleOutput parse(const std::string& s);
  bool operator==(const RuleOutput&) const = default;
};

struct Rule {
  int id = 0;  // 1..27
  FuzzyLabel rssi = FuzzyLabel::Low;
  FuzzyLabel speed = FuzzyLabel::Low;
  FuzzyLabel distance = FuzzyLabel::Low;
  RuleOutput output;
};

enum class TNorm { Min, Product };
enum class ScoreAggregation { RootSumSquare, RootMeanSquare };

struct FuzzyConfig {
  FuzzyVariable rssi;
  FuzzyVariable speed;
  FuzzyVariable distance;
  std::array<Rule, kNumRules> rules;
  TNorm t_norm = TNorm::Min;
  ScoreAggregation aggregation = ScoreAggregation::RootSumSquare;

  const FuzzyVariable& variable(FuzzyInput v) const;

  // Checks breakpoint ordering, antecedent exhaustiveness, the 13/14 output
  // split and label coverage of each declared domain. Throws on violation.
  void validate() const;

  static FuzzyConfig defaults();
};

struct InputVector {
  double rssi_db = 0;      // attenuation, larger = weaker link
  double speed_kmph = 0;
  double distance_m = 0;
};

struct FuzzifiedInput {
  // degrees[input][label]
  std::array<std::array<double, kNumLabels>, kNumInputs> degrees{};
  bool clamped = false;  // some reading fell outside its declared domain

  double degree(FuzzyInput v, FuzzyLabel l) const {
    return degrees[static_cast<std::size_t>(v)][static_cast<std::size_t>(l)];
  }
};

struct InferenceResult {
  std::array<double, kNumRules> firing{};  // activation per rule id-1
  double nh_score = 0;
  double h_score = 0;
  double score = 0;  // in [-100, 100]
  bool input_clamped = false;
};

// Raised when no rule fires at all, i.e. the membership config leaves a
// coverage hole.
struct IndeterminateScoreError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

FuzzifiedInput fuzzify(const InputVector& in, const FuzzyConfig& cfg);

std::array<double, kNumRules> fire_rules(const FuzzifiedInput& degrees,
                                         const FuzzyConfig& cfg);

// Root-sum-square (or RMS) over the NotHandover / Handover rule families.
struct AggregateScores {
  double nh_score = 0;
  double h_score = 0;
};
AggregateScores aggregate(const std::array<double, kNumRules>& firing,
                          const FuzzyConfig& cfg);

double defuzzify(double nh_score, double h_score);

InferenceResult infer(const InputVector& in, const FuzzyConfig& cfg);

}  // namespace wmsim
