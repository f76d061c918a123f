#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace sumlevel {

inline constexpr char kCheckpointMagic[4] = {'S', 'L', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr const char* kCheckpointDirEnv = "SUMLEVEL_CHECKPOINT_DIR";

/// Directory named by SUMLEVEL_CHECKPOINT_DIR, if set and non-empty.
std::optional<std::filesystem::path> checkpoint_dir_from_env();

/// Canonical file name for an operator run on the given mesh.
std::string checkpoint_file_name(const std::string& mesh_kind, std::uint64_t intervals, int octaves);

} // namespace sumlevel
