#pragma once

// Text formats for curves, rate tables, chain censuses and Monte Carlo
// estimates.  Reals are written with 17 significant digits so that parsing
// recovers the exact double.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mldp/ising.hpp"
#include "mldp/lattice.hpp"
#include "mldp/oracle.hpp"
#include "mldp/rate.hpp"

namespace mldp {

std::string format_real(double x);
double parse_real(std::string_view text);

struct CurvePoint {
  double beta = 0.0;
  double value = 0.0;
  double derivative = 0.0;
  double tail_bound = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

// A curve point tagged with the figure setting and bias it belongs to.
struct FigurePoint {
  int figure = 1;
  double r = 0.5;
  CurvePoint point;

  friend bool operator==(const FigurePoint&, const FigurePoint&) = default;
};

struct DimensionPoint {
  double alpha = 0.0;
  double dimension = 0.0;

  friend bool operator==(const DimensionPoint&, const DimensionPoint&) = default;
};

inline constexpr std::string_view kCurveHeader = "beta,value,derivative,tail_bound";
inline constexpr std::string_view kFigureHeader = "figure,r,beta,value,derivative,tail_bound";
inline constexpr std::string_view kRateHeader = "x,value,eta,in_domain";
inline constexpr std::string_view kCensusHeader =
    "ell,count_all,count_free,density_all,density_free";
inline constexpr std::string_view kDimensionHeader = "alpha,dimension";
inline constexpr std::string_view kSamplesHeader = "sample_index,S";
inline constexpr std::string_view kVerifyHeader = "oracle,formula,abs_diff,agree";

void write_curve_csv(std::ostream& os, std::span<const CurvePoint> points);
void write_curve_json(std::ostream& os, std::span<const CurvePoint> points);
std::vector<CurvePoint> read_curve_csv(std::istream& is);
std::vector<CurvePoint> read_curve_json(std::istream& is);

void write_figure_csv(std::ostream& os, std::span<const FigurePoint> points);
void write_figure_json(std::ostream& os, std::span<const FigurePoint> points);
std::vector<FigurePoint> read_figure_csv(std::istream& is);

// Out-of-domain rows carry value "inf" and an empty eta (null in JSON).
void write_rate_csv(std::ostream& os, std::span<const RateValue> rows);
void write_rate_json(std::ostream& os, std::span<const RateValue> rows);
std::vector<RateValue> read_rate_csv(std::istream& is);
std::vector<RateValue> read_rate_json(std::istream& is);

void write_census_csv(std::ostream& os, const ChainCensus& census);
void write_census_json(std::ostream& os, const ChainCensus& census);
// The volume is recovered as sum_l count_all.
ChainCensus read_census_csv(std::istream& is);

void write_dimension_csv(std::ostream& os, std::span<const DimensionPoint> points);
void write_dimension_json(std::ostream& os, std::span<const DimensionPoint> points);
std::vector<DimensionPoint> read_dimension_csv(std::istream& is);

void write_estimate_json(std::ostream& os, const McEstimate& est);
McEstimate read_estimate_json(std::istream& is);

void write_spectrum_json(std::ostream& os, std::span<const TransferSpectrum> spectra);

void write_samples_csv(std::ostream& os, std::span<const std::int64_t> sums);
std::vector<std::int64_t> read_samples_csv(std::istream& is);

}  // namespace mldp
