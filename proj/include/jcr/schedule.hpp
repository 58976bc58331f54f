#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace jcr {

enum class WaveFamily { Uniform, Nested, Wichmann, Custom };

std::string family_name(WaveFamily family);

/// Two integer family parameters: (M_U, unused) for uniform, (M1, M2) for
/// nested, (p, q) for Wichmann. Unused slots stay zero.
struct FamilyParams {
  int a = 0;
  int b = 0;
  bool operator==(const FamilyParams&) const = default;
};

/// Preamble slot schedule. Positions are integer multiples of the Doppler
/// Nyquist interval, strictly increasing; builders anchor the first slot at 0.
struct PreambleSchedule {
  std::vector<int> positions;
  WaveFamily family = WaveFamily::Custom;
  FamilyParams params;
  double slot_interval_s = 0.0;  // T_D
  double cpi_s = 0.0;            // total CPI duration T

  int count() const { return static_cast<int>(positions.size()); }
  int aperture() const { return positions.back() - positions.front(); }

  /// Largest unambiguous speed for this slot spacing: lambda / (4 T_D).
  double unambiguous_vmax(double wavelength_m) const {
    return wavelength_m / (4.0 * slot_interval_s);
  }
};

/// Difference co-waveform of a schedule: the distinct non-negative pairwise
/// slot differences with their ordered-pair multiplicities.
struct CoWaveform {
  std::vector<int> lags;          // sorted ascending, lags[0] == 0
  std::vector<int> multiplicity;  // ordered pairs realizing each lag
  int contiguous_extent = 0;      // largest L with {0..L} all present
  bool hole_free = false;         // no gaps up to the maximum lag
  int vp_count_one_sided = 0;     // distinct positive lags present

  int max_lag() const { return lags.back(); }
  int multiplicity_of(int lag) const;
};

PreambleSchedule build_uniform(int m_u, double slot_interval_s, double cpi_s);
PreambleSchedule build_nested(int m1, int m2, double slot_interval_s, double cpi_s);
PreambleSchedule build_wichmann(int p, int q, double slot_interval_s, double cpi_s);

/// Hand-specified slot positions (strictly increasing, any origin).
PreambleSchedule make_custom(std::vector<int> positions, double slot_interval_s, double cpi_s);

/// Spacing template for the Wichmann ruler construction.
std::vector<int> wichmann_spacings(int p, int q);

/// Elements produced by the Wichmann template: 3p + 2q + 3.
int wichmann_element_count(int p, int q);

/// Exhaustive enumeration of the difference co-waveform.
CoWaveform difference_cowaveform(const PreambleSchedule& schedule);

/// Closed-form one-sided virtual-preamble count for the canonical families.
long vp_count_closed_form(WaveFamily family, FamilyParams params);

/// Family parameters chosen by the VP-count-maximizing rules for an element
/// budget. For Wichmann the template may emit a different element count than
/// the budget; `count_mismatch` records that.
struct VpOptimalParams {
  FamilyParams params;
  int element_count = 0;
  bool count_mismatch = false;
};

VpOptimalParams vp_count_optimal_params(WaveFamily family, int m_budget);

/// Per-frame preamble timing used for the overhead model.
struct FrameTiming {
  long preamble_symbols = 3328;         // P
  double symbol_period_s = 1.0 / 1.76e9;  // T_s
  double ifs_s = 3e-6;                  // interframe spacing
};

/// Fraction of the CPI left for data: mu = 1 - M (P T_s + T_IFS) / T.
double preamble_overhead_mu(const PreambleSchedule& schedule, const FrameTiming& timing);

}  // namespace jcr
