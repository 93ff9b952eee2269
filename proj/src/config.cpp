#include "courtprior/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace courtprior {

using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_keys(const json& obj, const std::string& prefix, const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!known.count(key))
      throw ConfigError("unknown config key '" + (prefix.empty() ? key : prefix + "." + key) + "'");
  }
}

double num(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(std::string("config key '") + key + "' must be a number");
  return obj[key].get<double>();
}

int integer(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    throw ConfigError(std::string("config key '") + key + "' must be an integer");
  return obj[key].get<int>();
}

bool boolean(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) throw ConfigError(std::string("config key '") + key + "' must be a bool");
  return obj[key].get<bool>();
}

// Parse "a.b.c=value" into doc[a][b][c]; the value is parsed as JSON when
// possible, otherwise taken as a string.
void apply_override(json& doc, const std::string& setting) {
  const size_t eq = setting.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + setting + "' is not of the form key=value");
  const std::string path = setting.substr(0, eq);
  const std::string raw = setting.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  json* node = &doc;
  size_t start = 0;
  while (true) {
    const size_t dot = path.find('.', start);
    const std::string part = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigError("override '" + setting + "' has an empty path segment");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (!node->is_object() && !node->is_null())
      throw ConfigError("override '" + setting + "' descends into a non-object");
    start = dot + 1;
  }
}

} // namespace

json PipelineConfig::reference() {
  const PipelineConfig d;
  json j;
  j["seed"] = 0;
  j["threads"] = "auto";
  j["court"] = {{"canny_sigma", d.court.canny_sigma},
                {"canny_low", d.court.canny_low},
                {"canny_high", d.court.canny_high},
                {"hough_vote_threshold", d.court.hough_vote_threshold},
                {"hough_rho_resolution", d.court.hough_rho_resolution},
                {"hough_theta_resolution_deg", 1.0},
                {"hough_max_line_gap", d.court.hough_max_line_gap},
                {"hough_min_line_frac", d.court.hough_min_line_frac},
                {"hough_sample_fraction", d.court.hough_sample_fraction},
                {"formula", "clamped"},
                {"headroom_px", d.court.headroom_px}};
  j["identity"] = {{"band_area_fraction", d.court.band_area_fraction},
                   {"band_mode", "area_fraction"}};
  j["styles"] = {{"player", {{"strength", d.copypaste.player_curve_strength}}},
                 {"perimeter",
                  {{"sp_density", d.copypaste.sp_density},
                   {"brightness_range",
                    json::array({d.copypaste.brightness_min, d.copypaste.brightness_max})}}}};
  j["copypaste"] = {{"duplication", d.copypaste.duplication},
                    {"paste_min", d.copypaste.paste_min},
                    {"paste_max", d.copypaste.paste_max},
                    {"scale_range", json::array({d.copypaste.scale_min, d.copypaste.scale_max})},
                    {"flip_prob", d.copypaste.flip_prob},
                    {"min_visible_area", d.copypaste.min_visible_area},
                    {"placement_margin_px", d.copypaste.placement_margin_px},
                    {"same_court_only", d.copypaste.same_court_only}};
  json choices = json::array();
  for (const auto& [w, h] : d.online.resize_choices) choices.push_back(json::array({w, h}));
  j["online"] = {{"flip_prob", d.online.flip_prob},
                 {"resize_choices", choices},
                 {"crop_area_fraction", d.online.crop_area_fraction},
                 {"normalize_mean", d.online.normalize_mean},
                 {"normalize_std", d.online.normalize_std},
                 {"min_visible_area", d.online.min_visible_area},
                 {"gridmask",
                  {{"ratio", d.online.gridmask.ratio},
                   {"d_min", d.online.gridmask.d_min},
                   {"d_max", d.online.gridmask.d_max},
                   {"rotate_max_deg", d.online.gridmask.rotate_max_deg},
                   {"apply_prob", d.online.gridmask.apply_prob}}}};
  j["roi"] = {{"max_side", d.roi_max_side}};
  return j;
}

PipelineConfig PipelineConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
  check_keys(doc, "",
             {"seed", "threads", "court", "identity", "styles", "copypaste", "online", "roi"});

  PipelineConfig cfg;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer()) throw ConfigError("config key 'seed' must be an integer");
    cfg.seed = doc["seed"].get<uint64_t>();
  }
  if (doc.contains("threads")) {
    if (doc["threads"].is_string()) {
      if (doc["threads"] != "auto")
        throw ConfigError("config key 'threads' must be an integer or \"auto\"");
      cfg.threads = 0;
    } else if (doc["threads"].is_number_integer()) {
      cfg.threads = doc["threads"].get<int>();
      if (cfg.threads < 0) throw ConfigError("config key 'threads' must be non-negative");
    } else {
      throw ConfigError("config key 'threads' must be an integer or \"auto\"");
    }
  }

  if (doc.contains("court")) {
    const json& c = doc["court"];
    check_keys(c, "court",
               {"canny_sigma", "canny_low", "canny_high", "hough_vote_threshold",
                "hough_rho_resolution", "hough_theta_resolution_deg", "hough_max_line_gap",
                "hough_min_line_frac", "hough_sample_fraction", "formula", "headroom_px"});
    cfg.court.canny_sigma = num(c, "canny_sigma", cfg.court.canny_sigma);
    cfg.court.canny_low = num(c, "canny_low", cfg.court.canny_low);
    cfg.court.canny_high = num(c, "canny_high", cfg.court.canny_high);
    cfg.court.hough_vote_threshold = integer(c, "hough_vote_threshold", cfg.court.hough_vote_threshold);
    cfg.court.hough_rho_resolution = num(c, "hough_rho_resolution", cfg.court.hough_rho_resolution);
    cfg.court.hough_theta_resolution = num(c, "hough_theta_resolution_deg", 1.0) * kPi / 180.0;
    cfg.court.hough_max_line_gap = num(c, "hough_max_line_gap", cfg.court.hough_max_line_gap);
    cfg.court.hough_min_line_frac = num(c, "hough_min_line_frac", cfg.court.hough_min_line_frac);
    cfg.court.hough_sample_fraction = num(c, "hough_sample_fraction", cfg.court.hough_sample_fraction);
    cfg.court.headroom_px = num(c, "headroom_px", cfg.court.headroom_px);
    if (c.contains("formula")) {
      const std::string f = c["formula"].get<std::string>();
      if (f == "clamped") cfg.court.formula = CourtDetectParams::Formula::Clamped;
      else if (f == "verbatim") cfg.court.formula = CourtDetectParams::Formula::Verbatim;
      else throw ConfigError("court.formula must be 'clamped' or 'verbatim'");
    }
  }

  if (doc.contains("identity")) {
    const json& c = doc["identity"];
    check_keys(c, "identity", {"band_area_fraction", "band_mode"});
    cfg.court.band_area_fraction = num(c, "band_area_fraction", cfg.court.band_area_fraction);
    if (c.contains("band_mode")) {
      const std::string m = c["band_mode"].get<std::string>();
      if (m == "area_fraction") cfg.court.band_mode = CourtDetectParams::BandMode::AreaFraction;
      else if (m == "linear_inset") cfg.court.band_mode = CourtDetectParams::BandMode::LinearInset;
      else throw ConfigError("identity.band_mode must be 'area_fraction' or 'linear_inset'");
    }
  }

  if (doc.contains("styles")) {
    const json& c = doc["styles"];
    check_keys(c, "styles", {"player", "perimeter"});
    if (c.contains("player")) {
      check_keys(c["player"], "styles.player", {"strength"});
      cfg.copypaste.player_curve_strength =
          num(c["player"], "strength", cfg.copypaste.player_curve_strength);
    }
    if (c.contains("perimeter")) {
      const json& p = c["perimeter"];
      check_keys(p, "styles.perimeter", {"sp_density", "brightness_range"});
      cfg.copypaste.sp_density = num(p, "sp_density", cfg.copypaste.sp_density);
      if (p.contains("brightness_range")) {
        const json& r = p["brightness_range"];
        if (!r.is_array() || r.size() != 2)
          throw ConfigError("styles.perimeter.brightness_range must be [lo, hi]");
        cfg.copypaste.brightness_min = r[0].get<double>();
        cfg.copypaste.brightness_max = r[1].get<double>();
      }
    }
  }

  if (doc.contains("copypaste")) {
    const json& c = doc["copypaste"];
    check_keys(c, "copypaste",
               {"duplication", "paste_min", "paste_max", "scale_range", "flip_prob",
                "min_visible_area", "placement_margin_px", "same_court_only"});
    cfg.copypaste.duplication = integer(c, "duplication", cfg.copypaste.duplication);
    cfg.copypaste.paste_min = integer(c, "paste_min", cfg.copypaste.paste_min);
    cfg.copypaste.paste_max = integer(c, "paste_max", cfg.copypaste.paste_max);
    if (c.contains("scale_range")) {
      const json& r = c["scale_range"];
      if (!r.is_array() || r.size() != 2)
        throw ConfigError("copypaste.scale_range must be [lo, hi]");
      cfg.copypaste.scale_min = r[0].get<double>();
      cfg.copypaste.scale_max = r[1].get<double>();
    }
    cfg.copypaste.flip_prob = num(c, "flip_prob", cfg.copypaste.flip_prob);
    cfg.copypaste.min_visible_area = num(c, "min_visible_area", cfg.copypaste.min_visible_area);
    cfg.copypaste.placement_margin_px =
        num(c, "placement_margin_px", cfg.copypaste.placement_margin_px);
    cfg.copypaste.same_court_only = boolean(c, "same_court_only", cfg.copypaste.same_court_only);
  }

  if (doc.contains("online")) {
    const json& c = doc["online"];
    check_keys(c, "online",
               {"flip_prob", "resize_choices", "crop_area_fraction", "normalize_mean",
                "normalize_std", "min_visible_area", "gridmask"});
    cfg.online.flip_prob = num(c, "flip_prob", cfg.online.flip_prob);
    cfg.online.crop_area_fraction = num(c, "crop_area_fraction", cfg.online.crop_area_fraction);
    cfg.online.min_visible_area = num(c, "min_visible_area", cfg.online.min_visible_area);
    if (c.contains("resize_choices")) {
      cfg.online.resize_choices.clear();
      for (const json& choice : c["resize_choices"]) {
        if (!choice.is_array() || choice.size() != 2)
          throw ConfigError("online.resize_choices entries must be [w, h]");
        cfg.online.resize_choices.emplace_back(choice[0].get<int>(), choice[1].get<int>());
      }
      if (cfg.online.resize_choices.empty())
        throw ConfigError("online.resize_choices must not be empty");
    }
    if (c.contains("normalize_mean"))
      cfg.online.normalize_mean = c["normalize_mean"].get<std::array<double, 3>>();
    if (c.contains("normalize_std"))
      cfg.online.normalize_std = c["normalize_std"].get<std::array<double, 3>>();
    if (c.contains("gridmask")) {
      const json& g = c["gridmask"];
      check_keys(g, "online.gridmask", {"ratio", "d_min", "d_max", "rotate_max_deg", "apply_prob"});
      cfg.online.gridmask.ratio = num(g, "ratio", cfg.online.gridmask.ratio);
      cfg.online.gridmask.d_min = integer(g, "d_min", cfg.online.gridmask.d_min);
      cfg.online.gridmask.d_max = integer(g, "d_max", cfg.online.gridmask.d_max);
      cfg.online.gridmask.rotate_max_deg = num(g, "rotate_max_deg", cfg.online.gridmask.rotate_max_deg);
      cfg.online.gridmask.apply_prob = num(g, "apply_prob", cfg.online.gridmask.apply_prob);
    }
  }

  if (doc.contains("roi")) {
    const json& c = doc["roi"];
    check_keys(c, "roi", {"max_side"});
    cfg.roi_max_side = integer(c, "max_side", cfg.roi_max_side);
    if (cfg.roi_max_side <= 0) throw ConfigError("roi.max_side must be positive");
  }

  // Cross-field sanity.
  if (!(cfg.court.band_area_fraction >= 0.0) || cfg.court.band_area_fraction >= 1.0)
    throw ConfigError("identity.band_area_fraction must be in [0, 1)");
  if (cfg.copypaste.brightness_min > cfg.copypaste.brightness_max)
    throw ConfigError("styles.perimeter.brightness_range must be ordered");
  if (cfg.copypaste.scale_min > cfg.copypaste.scale_max || cfg.copypaste.scale_min <= 0.0)
    throw ConfigError("copypaste.scale_range must be ordered and positive");
  if (cfg.online.gridmask.d_min <= 0 || cfg.online.gridmask.d_max < cfg.online.gridmask.d_min)
    throw ConfigError("online.gridmask d range is invalid");
  if (!(cfg.online.gridmask.ratio > 0.0) || cfg.online.gridmask.ratio >= 1.0)
    throw ConfigError("online.gridmask.ratio must be in (0, 1)");
  return cfg;
}

PipelineConfig PipelineConfig::resolve(const std::filesystem::path& config_file,
                                       const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (!config_file.empty()) {
    std::ifstream f(config_file);
    if (!f) throw IoError("cannot open config file: " + config_file.string());
    try {
      doc = json::parse(f);
    } catch (const json::parse_error& e) {
      throw ConfigError(config_file.string() + ": " + e.what());
    }
  }
  for (const std::string& setting : overrides) apply_override(doc, setting);
  return from_json(doc);
}

} // namespace courtprior
