#pragma once

// Touchstone v1.x, 2-port only.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "siwkit/q_extraction.hpp"

namespace siwkit {

enum class FreqUnit { Hz, kHz, MHz, GHz };
enum class DataFormat { RI, MA, DB };

struct OptionLine {
    FreqUnit unit = FreqUnit::GHz;
    char parameter = 'S';
    DataFormat format = DataFormat::MA;
    double resistance = 50.0;
};

struct TouchstoneDocument {
    OptionLine options;
    std::vector<std::string> comments;  // without the leading '!'
    SParameterTrace trace;
};

TouchstoneDocument parse_touchstone(std::string_view text);
TouchstoneDocument load_touchstone(const std::filesystem::path& path);

/// Writes `trace` in `format` with 9 significant digits. Comments go to the
/// file head.
std::string write_touchstone(const SParameterTrace& trace, DataFormat format = DataFormat::MA,
                             FreqUnit unit = FreqUnit::GHz,
                             const std::vector<std::string>& comments = {});

struct ZParameterTrace {
    std::vector<double> freqs;
    std::vector<cplx> z11, z12, z21, z22;
};

/// Z = z0·(I + S)·(I − S)⁻¹ per frequency point.
ZParameterTrace s_to_z(const SParameterTrace& trace);

std::string_view to_string(DataFormat format) noexcept;
DataFormat parse_data_format(std::string_view text);

}  // namespace siwkit
