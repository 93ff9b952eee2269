#ifndef COURTPRIOR_CONFIG_HPP
#define COURTPRIOR_CONFIG_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "courtprior/copypaste.hpp"
#include "courtprior/court.hpp"
#include "courtprior/onlineaug.hpp"

namespace courtprior {

/**
 * One tree-structured config file covers every tunable; flag overrides
 * (--set a.b=v) win over the file, which wins over defaults. Unknown keys
 * are a hard ConfigError naming the offending path.
 */
struct PipelineConfig {
  uint64_t seed = 0;
  int threads = 0; // 0 = auto

  CourtDetectParams court;   // includes identity band settings
  CopyPasteConfig copypaste; // includes style parameters
  OnlineAugConfig online;
  int roi_max_side = 1400;

  /// Defaults merged with an optional config file and --set overrides.
  static PipelineConfig resolve(const std::filesystem::path& config_file,
                                const std::vector<std::string>& overrides);

  static PipelineConfig from_json(const nlohmann::json& doc);

  /// Full reference document with every key at its default.
  static nlohmann::json reference();
};

} // namespace courtprior

#endif
