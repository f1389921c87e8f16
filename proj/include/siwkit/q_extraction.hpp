#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace siwkit {

using cplx = std::complex<double>;

/// Two-port network data on a strictly increasing frequency grid (Hz).
struct SParameterTrace {
    std::vector<double> freqs;
    std::vector<cplx> s11, s21, s12, s22;
    double z0 = 50.0;

    [[nodiscard]] std::size_t size() const noexcept { return freqs.size(); }
    void validate() const;
};

enum class QMode { Standard, PaperLiteral };

std::string_view to_string(QMode mode) noexcept;
QMode parse_q_mode(std::string_view text);

struct QReport {
    double f0 = 0.0;       // Hz
    double il_db = 0.0;    // |S21(f0)| in dB, ≤ 0
    double delta_f = 0.0;  // Hz
    double q_loaded = 0.0;
    double q_external = 0.0;
    double q_unloaded = 0.0;
    QMode mode = QMode::Standard;
};

struct Resonance {
    double f0 = 0.0;
    double il_db = 0.0;
};

struct UnloadedQ {
    double q_unloaded = 0.0;
    double q_external = 0.0;
};

/// 10·log10(2): the half-power drop in dB.
inline constexpr double half_power_db = 3.0102999566398120;

struct ExtractionOptions {
    QMode mode = QMode::Standard;
    bool smooth = false;  // 3-point moving average on |S21| before extraction
};

/// Global |S21| maximum refined by a 3-point parabola in dB. Equal peaks
/// resolve to the lowest frequency.
Resonance find_resonance(const SParameterTrace& trace);

/// Width between the two (il_db − 3.0103 dB) crossings, each interpolated
/// linearly in dB between neighbouring grid points.
double half_power_bandwidth(const SParameterTrace& trace, double f0, double il_db);

double loaded_q(double f0, double delta_f);

/// Standard mode: Qe = QL/|S21|, Qu = QL/(1 − |S21|).
/// Literal mode: Qe = 10^(−IL/20) and 1/Qu = 1/QL + 1/Qe, evaluated as
/// printed. The literal numbers are not physical and exist for comparison.
UnloadedQ unloaded_q(double q_loaded, double il_db, QMode mode = QMode::Standard);

QReport extract_q_report(const SParameterTrace& trace, const ExtractionOptions& options = {});

/// Single-pole transmission resonator sampled on `grid`.
SParameterTrace synthesize_trace(double f0, double q_loaded, double q_unloaded,
                                 const std::vector<double>& grid, double z0 = 50.0);

/// Evenly spaced grid of `points` samples in [start, stop].
std::vector<double> linear_grid(double start, double stop, std::size_t points);

/// Flat `key = value` block, GHz/MHz/dB units.
std::string q_report_to_text(const QReport& report);

inline constexpr std::string_view q_report_csv_header = "file,f0_GHz,IL_dB,delta_f_MHz,QL,Qe,Qu,mode";
std::string q_report_to_csv_row(std::string_view file, const QReport& report);

double to_db(double magnitude);
double from_db(double db);

}  // namespace siwkit
