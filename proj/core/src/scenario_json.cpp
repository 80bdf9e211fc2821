#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wmsim/scenario.hpp"

#include <json.hpp>

namespace wmsim {

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> known,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw std::invalid_argument("scenario: unknown key \"" + it.key() + "\" in " + where);
  }
}

json mf_to_json(const MembershipFunction& mf) {
  return json::array({mf.a, mf.b, mf.c, mf.d});
}

MembershipFunction mf_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4)
    throw std::invalid_argument("scenario: membership function must be [a,b,c,d]");
  return MembershipFunction{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                            j[3].get<double>()};
}

json variable_to_json(const FuzzyVariable& v) {
  return json{
      {"domain", json::array({v.domain_lo, v.domain_hi})},
      {"low", mf_to_json(v.mf(FuzzyLabel::Low))},
      {"medium", mf_to_json(v.mf(FuzzyLabel::Medium))},
      {"high", mf_to_json(v.mf(FuzzyLabel::High))},
  };
}

void variable_from_json(const json& j, FuzzyVariable& v, const std::string& where) {
  check_keys(j, {"domain", "low", "medium", "high"}, where);
  if (j.contains("domain")) {
    v.domain_lo = j["domain"][0].get<double>();
    v.domain_hi = j["domain"][1].get<double>();
  }
  if (j.contains("low")) v.labels[static_cast<std::size_t>(FuzzyLabel::Low)] = mf_from_json(j["low"]);
  if (j.contains("medium"))
    v.labels[static_cast<std::size_t>(FuzzyLabel::Medium)] = mf_from_json(j["medium"]);
  if (j.contains("high"))
    v.labels[static_cast<std::size_t>(FuzzyLabel::High)] = mf_from_json(j["high"]);
}

json fuzzy_to_json(const FuzzyConfig& f) {
  json rules = json::array();
  for (const auto& r : f.rules) {
    rules.push_back(json{{"rssi", to_string(r.rssi)},
                         {"speed", to_string(r.speed)},
                         {"distance", to_string(r.distance)},
                         {"output", r.output.to_string()}});
  }
  return json{
      {"rssi", variable_to_json(f.rssi)},
      {"speed", variable_to_json(f.speed)},
      {"distance", variable_to_json(f.distance)},
      {"t_norm", f.t_norm == TNorm::Min ? "min" : "product"},
      {"aggregation",
       f.aggregation == ScoreAggregation::RootSumSquare ? "root-sum-square"
                                                        : "root-mean-square"},
      {"rules", rules},
  };
}

void fuzzy_from_json(const json& j, FuzzyConfig& f) {
  check_keys(j, {"rssi", "speed", "distance", "t_norm", "aggregation", "rules"}, "fuzzy");
  if (j.contains("rssi")) variable_from_json(j["rssi"], f.rssi, "fuzzy.rssi");
  if (j.contains("speed")) variable_from_json(j["speed"], f.speed, "fuzzy.speed");
  if (j.contains("distance")) variable_from_json(j["distance"], f.distance, "fuzzy.distance");
  if (j.contains("t_norm")) {
    std::string t = j["t_norm"].get<std::string>();
    if (t == "min")
      f.t_norm = TNorm::Min;
    else if (t == "product")
      f.t_norm = TNorm::Product;
    else
      throw std::invalid_argument("scenario: t_norm must be min or product");
  }
  if (j.contains("aggregation")) {
    std::string a = j["aggregation"].get<std::string>();
    if (a == "root-sum-square")
      f.aggregation = ScoreAggregation::RootSumSquare;
    else if (a == "root-mean-square")
      f.aggregation = ScoreAggregation::RootMeanSquare;
    else
      throw std::invalid_argument("scenario: aggregation must be root-sum-square or root-mean-square");
  }
  if (j.contains("rules")) {
    const json& rules = j["rules"];
    if (!rules.is_array() || rules.size() != kNumRules)
      throw std::invalid_argument("scenario: fuzzy.rules must list exactly 27 rules");
    for (std::size_t i = 0; i < kNumRules; ++i) {
      const json& r = rules[i];
      check_keys(r, {"rssi", "speed", "distance", "output"}, "fuzzy.rules[]");
      Rule rule;
      rule.id = static_cast<int>(i) + 1;
      rule.rssi = fuzzy_label_from_string(r.at("rssi").get<std::string>());
      rule.speed = fuzzy_label_from_string(r.at("speed").get<std::string>());
      rule.distance = fuzzy_label_from_string(r.at("distance").get<std::string>());
      rule.output = RuleOutput::parse(r.at("output").get<std::string>());
      f.rules[i] = rule;
    }
  }
}

}  // namespace

std::string scenario_to_json_text(const Scenario& s, int indent) {
  json aps = json::array();
  for (const auto& ap : s.access_points)
    aps.push_back(json{{"x", ap.position.x}, {"y", ap.position.y}, {"channel", ap.channel}});

  json j{
      {"area", {{"width_m", s.area_width_m}, {"height_m", s.area_height_m}}},
      {"access_points", aps},
      {"home_ap", s.home_ap},
      {"start", s.start_position
                    ? json{{"x", s.start_position->x}, {"y", s.start_position->y}}
                    : json(nullptr)},
      {"speed_kmph", s.speed_kmph},
      {"duration_s", s.duration_s},
      {"seed", s.seed},
      {"traffic",
       {{"mn_interval_s", s.traffic.mn_interval_s},
        {"cn_interval_s", s.traffic.cn_interval_s},
        {"packet_bytes", s.traffic.packet_bytes}}},
      {"radio",
       {{"tx_power_mw", s.path_loss.tx_power_mw},
        {"wavelength_m", s.path_loss.wavelength_m},
        {"frequency_hz", s.path_loss.frequency_hz},
        {"path_loss_exponent", s.path_loss.exponent},
        {"reference_distance_m", s.path_loss.reference_distance_m},
        {"shadow_sigma_db", s.fading.shadow_sigma_db},
        {"multipath_sigma_db", s.fading.multipath_sigma_db},
        {"shadow_decorrelation_m", s.fading.shadow_decorrelation_m},
        {"fep_knee_db", s.frame_error.knee_db},
        {"fep_slope_db", s.frame_error.slope_db},
        {"interference_gain_db", s.frame_error.interference_gain_db},
        {"max_retries", s.frame_error.max_retries}}},
      {"measurement",
       {{"speed_sigma_kmph", s.noise.speed_sigma_kmph},
        {"distance_sigma_m", s.noise.distance_sigma_m}}},
      {"trigger",
       {{"algorithm", to_string(s.algorithm)},
        {"update_interval_s", s.trigger.update_interval_s},
        {"window_size", s.trigger.window_size},
        {"threshold_count", s.trigger.threshold_count},
        {"score_cutoff", s.trigger.score_cutoff},
        {"rssi_threshold_db", s.trigger.rssi_threshold_db},
        {"change_window", s.trigger.change_window},
        {"change_delta_db", s.trigger.change_delta_db},
        {"fr_threshold", s.trigger.fr_threshold},
        {"suppression_distance_m", s.trigger.suppression_distance_m},
        {"suppression_max_s", s.trigger.suppression_max_s},
        {"suppression_distance_mode",
         s.trigger.suppression_mode == SuppressionDistanceMode::Fixed ? "fixed"
                                                                      : "travelled"},
        {"trend_mode", s.trigger.trend_mode == TrendMode::Count ? "count" : "magnitude"},
        {"baseline_blackout_s", s.trigger.baseline_blackout_s}}},
      {"handover",
       {{"min_channel_time_s", s.scan.min_channel_time_s},
        {"max_channel_time_s", s.scan.max_channel_time_s},
        {"handshake_latency_s", s.handshake_latency_s},
        {"packets_during_handover",
         s.link.handover_packets == HandoverPacketPolicy::Lost ? "lost" : "queue"}}},
      {"link",
       {{"base_wire_delay_ms", s.link.base_wire_delay_ms},
        {"air_delay_ms_per_100m", s.link.air_delay_ms_per_100m},
        {"retry_penalty_ms", s.link.retry_penalty_ms},
        {"collision_prob", s.link.collision_prob},
        {"candidate_usable_db", s.link.candidate_usable_db},
        {"mn_source_buffering", s.link.mn_source_buffering}}},
      {"fuzzy", fuzzy_to_json(s.fuzzy)},
  };
  return j.dump(indent) + "\n";
}

Scenario scenario_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scenario: invalid JSON: ") + e.what());
  }

  Scenario s = Scenario::defaults();
  check_keys(j,
             {"area", "access_points", "home_ap", "start", "speed_kmph", "duration_s",
              "seed", "traffic", "radio", "measurement", "trigger", "handover", "link",
              "fuzzy"},
             "top level");

  if (j.contains("area")) {
    check_keys(j["area"], {"width_m", "height_m"}, "area");
    if (j["area"].contains("width_m")) s.area_width_m = j["area"]["width_m"].get<double>();
    if (j["area"].contains("height_m")) s.area_height_m = j["area"]["height_m"].get<double>();
  }
  if (j.contains("access_points")) {
    s.access_points.clear();
    for (const auto& ap : j["access_points"]) {
      check_keys(ap, {"x", "y", "channel"}, "access_points[]");
      AccessPoint a;
      a.position.x = ap.at("x").get<double>();
      a.position.y = ap.at("y").get<double>();
      if (ap.contains("channel")) a.channel = ap["channel"].get<int>();
      s.access_points.push_back(a);
    }
  }
  if (j.contains("home_ap")) s.home_ap = j["home_ap"].get<int>();
  if (j.contains("start")) {
    if (j["start"].is_null()) {
      s.start_position.reset();
    } else {
      check_keys(j["start"], {"x", "y"}, "start");
      s.start_position = Point{j["start"].at("x").get<double>(), j["start"].at("y").get<double>()};
    }
  }
  if (j.contains("speed_kmph")) s.speed_kmph = j["speed_kmph"].get<double>();
  if (j.contains("duration_s")) s.duration_s = j["duration_s"].get<double>();
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();

  if (j.contains("traffic")) {
    const json& t = j["traffic"];
    check_keys(t, {"mn_interval_s", "cn_interval_s", "packet_bytes"}, "traffic");
    if (t.contains("mn_interval_s")) s.traffic.mn_interval_s = t["mn_interval_s"].get<double>();
    if (t.contains("cn_interval_s")) s.traffic.cn_interval_s = t["cn_interval_s"].get<double>();
    if (t.contains("packet_bytes")) s.traffic.packet_bytes = t["packet_bytes"].get<int>();
  }
  if (j.contains("radio")) {
    const json& r = j["radio"];
    check_keys(r,
               {"tx_power_mw", "wavelength_m", "frequency_hz", "path_loss_exponent",
                "reference_distance_m", "shadow_sigma_db", "multipath_sigma_db",
                "shadow_decorrelation_m", "fep_knee_db", "fep_slope_db",
                "interference_gain_db", "max_retries"},
               "radio");
    if (r.contains("tx_power_mw")) s.path_loss.tx_power_mw = r["tx_power_mw"].get<double>();
    if (r.contains("wavelength_m")) s.path_loss.wavelength_m = r["wavelength_m"].get<double>();
    if (r.contains("frequency_hz")) s.path_loss.frequency_hz = r["frequency_hz"].get<double>();
    if (r.contains("path_loss_exponent")) s.path_loss.exponent = r["path_loss_exponent"].get<double>();
    if (r.contains("reference_distance_m"))
      s.path_loss.reference_distance_m = r["reference_distance_m"].get<double>();
    if (r.contains("shadow_sigma_db")) s.fading.shadow_sigma_db = r["shadow_sigma_db"].get<double>();
    if (r.contains("multipath_sigma_db"))
      s.fading.multipath_sigma_db = r["multipath_sigma_db"].get<double>();
    if (r.contains("shadow_decorrelation_m"))
      s.fading.shadow_decorrelation_m = r["shadow_decorrelation_m"].get<double>();
    if (r.contains("fep_knee_db")) s.frame_error.knee_db = r["fep_knee_db"].get<double>();
    if (r.contains("fep_slope_db")) s.frame_error.slope_db = r["fep_slope_db"].get<double>();
    if (r.contains("interference_gain_db"))
      s.frame_error.interference_gain_db = r["interference_gain_db"].get<double>();
    if (r.contains("max_retries")) s.frame_error.max_retries = r["max_retries"].get<int>();
  }
  if (j.contains("measurement")) {
    const json& m = j["measurement"];
    check_keys(m, {"speed_sigma_kmph", "distance_sigma_m"}, "measurement");
    if (m.contains("speed_sigma_kmph")) s.noise.speed_sigma_kmph = m["speed_sigma_kmph"].get<double>();
    if (m.contains("distance_sigma_m")) s.noise.distance_sigma_m = m["distance_sigma_m"].get<double>();
  }
  if (j.contains("trigger")) {
    const json& t = j["trigger"];
    check_keys(t,
               {"algorithm", "update_interval_s", "window_size", "threshold_count",
                "score_cutoff", "rssi_threshold_db", "change_window", "change_delta_db",
                "fr_threshold", "suppression_distance_m", "suppression_max_s",
                "suppression_distance_mode", "trend_mode", "baseline_blackout_s"},
               "trigger");
    if (t.contains("algorithm"))
      s.algorithm = trigger_algorithm_from_string(t["algorithm"].get<std::string>());
    if (t.contains("update_interval_s")) s.trigger.update_interval_s = t["update_interval_s"].get<double>();
    if (t.contains("window_size")) s.trigger.window_size = t["window_size"].get<int>();
    if (t.contains("threshold_count")) s.trigger.threshold_count = t["threshold_count"].get<int>();
    if (t.contains("score_cutoff")) s.trigger.score_cutoff = t["score_cutoff"].get<double>();
    if (t.contains("rssi_threshold_db")) s.trigger.rssi_threshold_db = t["rssi_threshold_db"].get<double>();
    if (t.contains("change_window")) s.trigger.change_window = t["change_window"].get<int>();
    if (t.contains("change_delta_db")) s.trigger.change_delta_db = t["change_delta_db"].get<double>();
    if (t.contains("fr_threshold")) s.trigger.fr_threshold = t["fr_threshold"].get<int>();
    if (t.contains("suppression_distance_m"))
      s.trigger.suppression_distance_m = t["suppression_distance_m"].get<double>();
    if (t.contains("suppression_max_s")) s.trigger.suppression_max_s = t["suppression_max_s"].get<double>();
    if (t.contains("suppression_distance_mode")) {
      std::string mode = t["suppression_distance_mode"].get<std::string>();
      if (mode == "fixed")
        s.trigger.suppression_mode = SuppressionDistanceMode::Fixed;
      else if (mode == "travelled")
        s.trigger.suppression_mode = SuppressionDistanceMode::Travelled;
      else
        throw std::invalid_argument("scenario: suppression_distance_mode must be fixed or travelled");
    }
    if (t.contains("trend_mode")) {
      std::string mode = t["trend_mode"].get<std::string>();
      if (mode == "count")
        s.trigger.trend_mode = TrendMode::Count;
      else if (mode == "magnitude")
        s.trigger.trend_mode = TrendMode::Magnitude;
      else
        throw std::invalid_argument("scenario: trend_mode must be count or magnitude");
    }
    if (t.contains("baseline_blackout_s"))
      s.trigger.baseline_blackout_s = t["baseline_blackout_s"].get<double>();
  }
  if (j.contains("handover")) {
    const json& h = j["handover"];
    check_keys(h,
               {"min_channel_time_s", "max_channel_time_s", "handshake_latency_s",
                "packets_during_handover"},
               "handover");
    if (h.contains("min_channel_time_s")) s.scan.min_channel_time_s = h["min_channel_time_s"].get<double>();
    if (h.contains("max_channel_time_s")) s.scan.max_channel_time_s = h["max_channel_time_s"].get<double>();
    if (h.contains("handshake_latency_s")) s.handshake_latency_s = h["handshake_latency_s"].get<double>();
    if (h.contains("packets_during_handover")) {
      std::string p = h["packets_during_handover"].get<std::string>();
      if (p == "lost")
        s.link.handover_packets = HandoverPacketPolicy::Lost;
      else if (p == "queue")
        s.link.handover_packets = HandoverPacketPolicy::Queue;
      else
        throw std::invalid_argument("scenario: packets_during_handover must be lost or queue");
    }
  }
  if (j.contains("link")) {
    const json& l = j["link"];
    check_keys(l,
               {"base_wire_delay_ms", "air_delay_ms_per_100m", "retry_penalty_ms",
                "collision_prob", "candidate_usable_db", "mn_source_buffering"},
               "link");
    if (l.contains("base_wire_delay_ms")) s.link.base_wire_delay_ms = l["base_wire_delay_ms"].get<double>();
    if (l.contains("air_delay_ms_per_100m"))
      s.link.air_delay_ms_per_100m = l["air_delay_ms_per_100m"].get<double>();
    if (l.contains("retry_penalty_ms")) s.link.retry_penalty_ms = l["retry_penalty_ms"].get<double>();
    if (l.contains("collision_prob")) s.link.collision_prob = l["collision_prob"].get<double>();
    if (l.contains("candidate_usable_db")) s.link.candidate_usable_db = l["candidate_usable_db"].get<double>();
    if (l.contains("mn_source_buffering")) s.link.mn_source_buffering = l["mn_source_buffering"].get<bool>();
  }
  if (j.contains("fuzzy")) fuzzy_from_json(j["fuzzy"], s.fuzzy);

  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("scenario: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str());
}

}  // namespace wmsim
