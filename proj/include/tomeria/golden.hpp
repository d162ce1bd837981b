#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "tomeria/level_io.hpp"

namespace tomeria {

/// Fixed inputs behind the golden files.
Json golden_level_request();
inline constexpr const char* kGoldenStoryScript =
    "peek:0:3,peek:1:2,choose:0,peek:0:2,peek:1:3,choose:1,choose:0,choose:1";

struct GoldenArtifact {
  std::string name;
  std::function<std::string()> produce;
};

/// Every golden artifact, in a fixed order.
std::vector<GoldenArtifact> golden_artifacts();

struct GoldenCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

/// Regenerates each artifact and compares it byte-for-byte with the file of
/// the same name in `dir`. With update=true the files are (re)written instead.
std::vector<GoldenCheck> verify_golden(const std::filesystem::path& dir, bool update = false);

}  // namespace tomeria
