#include "matchmkt/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "matchmkt/errors.hpp"

namespace matchmkt {

TierSpec parse_tiers(const std::string& spec) {
  auto split_fractions = [](const std::string& part) {
    std::vector<double> out;
    std::stringstream ss(part);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        out.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ConfigError("bad tier fraction: " + tok);
      }
    }
    return out;
  };
  auto semi = spec.find(';');
  if (semi == std::string::npos)
    throw ConfigError("tiers must be \"a1,a2,..;b1,b2,..\"");
  TierSpec tiers;
  tiers.applicant_fractions = split_fractions(spec.substr(0, semi));
  tiers.firm_fractions = split_fractions(spec.substr(semi + 1));
  tiers.validate();
  return tiers;
}

namespace {

using nlohmann::json;

void apply_scenario_json(const json& j, ScenarioConfig& cfg) {
  for (const auto& [key, value] : j.items()) {
    if (key == "n_applicants")
      cfg.base.n_applicants = value.get<int>();
    else if (key == "n_firms")
      cfg.base.n_firms = value.get<int>();
    else if (key == "seed")
      cfg.base.seed = value.get<std::uint64_t>();
    else if (key == "trials")
      cfg.trials = value.get<int>();
    else if (key == "threads")
      cfg.threads = value.get<int>();
    else if (key == "d")
      cfg.mechanism.d = value.get<int>();
    else if (key == "mechanism")
      cfg.mechanism =
          parse_mechanism(value.get<std::string>(),
                          j.contains("d") ? j.at("d").get<int>()
                                          : cfg.mechanism.d);
    else if (key == "dist_pre")
      cfg.base.pre_dist = parse_distribution(value.get<std::string>());
    else if (key == "dist_post")
      cfg.base.post_dist = parse_distribution(value.get<std::string>());
    else if (key == "tiers")
      cfg.base.tiers = parse_tiers(value.get<std::string>());
    else if (key == "proposing") {
      auto s = value.get<std::string>();
      if (s == "applicant")
        cfg.proposing = Side::Applicant;
      else if (s == "firm")
        cfg.proposing = Side::Firm;
      else
        throw ConfigError("proposing must be applicant or firm");
    } else if (key == "epsilon")
      cfg.epsilon = value.get<double>();
    else if (key == "include_unmatched_unmatched")
      cfg.include_unmatched_unmatched = value.get<bool>();
    else if (key == "record_timings")
      cfg.record_timings = value.get<bool>();
    else if (key == "route_untargeted_to_lowest")
      cfg.mechanism.route_untargeted_to_lowest = value.get<bool>();
    else if (key == "output")
      cfg.output_path = value.get<std::string>();
    else if (key == "sweep") {
      cfg.sweep.parameter = value.at("parameter").get<std::string>();
      cfg.sweep.values = value.at("values").get<std::vector<long>>();
    } else if (key == "applicant_type_mixture") {
      std::vector<std::pair<double, ScoreDistribution>> mix;
      for (const auto& entry : value)
        mix.emplace_back(entry.at(0).get<double>(),
                         parse_distribution(entry.at(1).get<std::string>()));
      cfg.base.applicant_type_mixture = std::move(mix);
    } else {
      throw ConfigError("unknown scenario field: " + key);
    }
  }
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid scenario JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("scenario JSON must be an object");
  ScenarioConfig cfg;
  try {
    apply_scenario_json(j, cfg);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid scenario field: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace matchmkt
