#pragma once

// Design file: INI-style key/value text with [substrate], [geometry] and
// [target] sections. Lengths in µm, frequency in GHz. Unknown sections or
// keys are rejected. See docs/design-file.md for the schema.

#include <filesystem>
#include <string>
#include <string_view>

#include "siwkit/core_model.hpp"

namespace siwkit {

ResonatorDesign parse_design_file(std::string_view text);
std::string write_design_file(const ResonatorDesign& design);

/// Substrate-only document: a single [substrate] section.
Substrate parse_substrate_file(std::string_view text);

ResonatorDesign load_design_file(const std::filesystem::path& path);

/// Resolves a `--substrate` argument: a preset name, or a path to a file
/// holding a [substrate] section.
Substrate resolve_substrate(std::string_view preset_or_path);

}  // namespace siwkit
