#include "mldp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "mldp/error.hpp"

namespace mldp {

using nlohmann::json;

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_real(std::string_view text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double out = 0.0;
  const char* first = text.data();
  if (!text.empty() && text.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(Errc::ParseError, "not a real number: '" + std::string(text) + "'");
  }
  return out;
}

namespace {

std::int64_t parse_int(std::string_view text) {
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(Errc::ParseError, "not an integer: '" + std::string(text) + "'");
  }
  return out;
}

bool parse_bool(std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw Error(Errc::ParseError, "not a boolean: '" + std::string(text) + "'");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::vector<std::string>> read_table(std::istream& is, std::string_view header) {
  std::string line;
  if (!std::getline(is, line) || line != header) {
    throw Error(Errc::ParseError, "expected header '" + std::string(header) + "', got '" + line + "'");
  }
  const std::size_t width = split(std::string(header)).size();
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != width) {
      throw Error(Errc::ParseError, "row '" + line + "' does not have " + std::to_string(width) +
                                        " columns");
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

// JSON numbers with 17 significant digits; infinities as strings, NaN as null.
std::string json_real(double x) {
  if (std::isnan(x)) return "null";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  return format_real(x);
}

double real_from_json(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) return parse_real(j.get<std::string>());
  if (j.is_number()) return j.get<double>();
  throw Error(Errc::ParseError, "expected a real, got " + j.dump());
}

json parse_json(std::istream& is) {
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

// Writes [ {..}, {..} ] with one record per line.
template <typename Range, typename Fn>
void write_json_array(std::ostream& os, const Range& rows, Fn&& record) {
  os << "[";
  bool first = true;
  for (const auto& row : rows) {
    os << (first ? "\n  " : ",\n  ") << record(row);
    first = false;
  }
  os << (first ? "]\n" : "\n]\n");
}

std::string curve_record(const CurvePoint& p) {
  return "{\"beta\": " + json_real(p.beta) + ", \"value\": " + json_real(p.value) +
         ", \"derivative\": " + json_real(p.derivative) +
         ", \"tail_bound\": " + json_real(p.tail_bound) + "}";
}

}  // namespace

void write_curve_csv(std::ostream& os, std::span<const CurvePoint> points) {
  os << kCurveHeader << '\n';
  for (const auto& p : points) {
    os << format_real(p.beta) << ',' << format_real(p.value) << ',' << format_real(p.derivative)
       << ',' << format_real(p.tail_bound) << '\n';
  }
}

void write_curve_json(std::ostream& os, std::span<const CurvePoint> points) {
  write_json_array(os, points, curve_record);
}

std::vector<CurvePoint> read_curve_csv(std::istream& is) {
  std::vector<CurvePoint> out;
  for (const auto& c : read_table(is, kCurveHeader)) {
    out.push_back({parse_real(c[0]), parse_real(c[1]), parse_real(c[2]), parse_real(c[3])});
  }
  return out;
}

std::vector<CurvePoint> read_curve_json(std::istream& is) {
  std::vector<CurvePoint> out;
  for (const auto& j : parse_json(is)) {
    out.push_back({real_from_json(j.at("beta")), real_from_json(j.at("value")),
                   real_from_json(j.at("derivative")), real_from_json(j.at("tail_bound"))});
  }
  return out;
}

void write_figure_csv(std::ostream& os, std::span<const FigurePoint> points) {
  os << kFigureHeader << '\n';
  for (const auto& f : points) {
    os << f.figure << ',' << format_real(f.r) << ',' << format_real(f.point.beta) << ','
       << format_real(f.point.value) << ',' << format_real(f.point.derivative) << ','
       << format_real(f.point.tail_bound) << '\n';
  }
}

void write_figure_json(std::ostream& os, std::span<const FigurePoint> points) {
  write_json_array(os, points, [](const FigurePoint& f) {
    return "{\"figure\": " + std::to_string(f.figure) + ", \"r\": " + json_real(f.r) + ", " +
           curve_record(f.point).substr(1);
  });
}

std::vector<FigurePoint> read_figure_csv(std::istream& is) {
  std::vector<FigurePoint> out;
  for (const auto& c : read_table(is, kFigureHeader)) {
    out.push_back({static_cast<int>(parse_int(c[0])), parse_real(c[1]),
                   {parse_real(c[2]), parse_real(c[3]), parse_real(c[4]), parse_real(c[5])}});
  }
  return out;
}

void write_rate_csv(std::ostream& os, std::span<const RateValue> rows) {
  os << kRateHeader << '\n';
  for (const auto& r : rows) {
    os << format_real(r.x) << ',';
    if (r.in_domain) {
      os << format_real(r.value) << ',' << format_real(r.eta) << ",true\n";
    } else {
      os << "inf,,false\n";
    }
  }
}

void write_rate_json(std::ostream& os, std::span<const RateValue> rows) {
  write_json_array(os, rows, [](const RateValue& r) {
    if (!r.in_domain) {
      return "{\"x\": " + json_real(r.x) + ", \"value\": \"inf\", \"eta\": null, \"in_domain\": false}";
    }
    return "{\"x\": " + json_real(r.x) + ", \"value\": " + json_real(r.value) +
           ", \"eta\": " + json_real(r.eta) + ", \"in_domain\": true}";
  });
}

std::vector<RateValue> read_rate_csv(std::istream& is) {
  std::vector<RateValue> out;
  for (const auto& c : read_table(is, kRateHeader)) {
    RateValue r;
    r.x = parse_real(c[0]);
    r.in_domain = parse_bool(c[3]);
    r.value = parse_real(c[1]);
    r.eta = c[2].empty() ? std::numeric_limits<double>::quiet_NaN() : parse_real(c[2]);
    out.push_back(r);
  }
  return out;
}

std::vector<RateValue> read_rate_json(std::istream& is) {
  std::vector<RateValue> out;
  for (const auto& j : parse_json(is)) {
    RateValue r;
    r.x = real_from_json(j.at("x"));
    r.value = real_from_json(j.at("value"));
    r.eta = real_from_json(j.at("eta"));
    r.in_domain = j.at("in_domain").get<bool>();
    out.push_back(r);
  }
  return out;
}

void write_census_csv(std::ostream& os, const ChainCensus& census) {
  os << kCensusHeader << '\n';
  const double v = static_cast<double>(census.volume());
  for (const auto& row : census.rows()) {
    os << row.length << ',' << row.count_all << ',' << row.count_free << ','
       << format_real(static_cast<double>(row.count_all) / v) << ','
       << format_real(static_cast<double>(row.count_free) / v) << '\n';
  }
}

void write_census_json(std::ostream& os, const ChainCensus& census) {
  const double v = static_cast<double>(census.volume());
  write_json_array(os, census.rows(), [v](const CensusRow& row) {
    return "{\"ell\": " + std::to_string(row.length) +
           ", \"count_all\": " + std::to_string(row.count_all) +
           ", \"count_free\": " + std::to_string(row.count_free) +
           ", \"density_all\": " + json_real(static_cast<double>(row.count_all) / v) +
           ", \"density_free\": " + json_real(static_cast<double>(row.count_free) / v) + "}";
  });
}

ChainCensus read_census_csv(std::istream& is) {
  std::vector<CensusRow> rows;
  std::uint64_t volume = 0;
  for (const auto& c : read_table(is, kCensusHeader)) {
    const auto ell = parse_int(c[0]);
    const auto all = parse_int(c[1]);
    const auto free = parse_int(c[2]);
    if (ell != static_cast<std::int64_t>(rows.size()) + 1 || all < 0 || free < 0) {
      throw Error(Errc::ParseError, "census rows must list l = 1, 2, ... with counts >= 0");
    }
    rows.push_back({static_cast<std::uint64_t>(ell), static_cast<std::uint64_t>(all),
                    static_cast<std::uint64_t>(free)});
    volume += static_cast<std::uint64_t>(all);
  }
  return ChainCensus(volume, std::move(rows));
}

void write_dimension_csv(std::ostream& os, std::span<const DimensionPoint> points) {
  os << kDimensionHeader << '\n';
  for (const auto& p : points) os << format_real(p.alpha) << ',' << format_real(p.dimension) << '\n';
}

void write_dimension_json(std::ostream& os, std::span<const DimensionPoint> points) {
  write_json_array(os, points, [](const DimensionPoint& p) {
    return "{\"alpha\": " + json_real(p.alpha) + ", \"dimension\": " + json_real(p.dimension) + "}";
  });
}

std::vector<DimensionPoint> read_dimension_csv(std::istream& is) {
  std::vector<DimensionPoint> out;
  for (const auto& c : read_table(is, kDimensionHeader)) {
    out.push_back({parse_real(c[0]), parse_real(c[1])});
  }
  return out;
}

void write_estimate_json(std::ostream& os, const McEstimate& est) {
  os << "{\"mean\": " << json_real(est.mean) << ", \"stderr\": " << json_real(est.std_error)
     << ", \"samples\": " << est.samples << ", \"seed\": " << est.seed;
  if (est.hits) os << ", \"hits\": " << *est.hits;
  os << "}\n";
}

McEstimate read_estimate_json(std::istream& is) {
  const json j = parse_json(is);
  McEstimate est;
  est.mean = real_from_json(j.at("mean"));
  est.std_error = real_from_json(j.at("stderr"));
  est.samples = j.at("samples").get<std::uint64_t>();
  est.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("hits")) est.hits = j.at("hits").get<std::uint64_t>();
  return est;
}

void write_spectrum_json(std::ostream& os, std::span<const TransferSpectrum> spectra) {
  write_json_array(os, spectra, [](const TransferSpectrum& s) {
    return "{\"beta\": " + json_real(s.beta) + ", \"r\": " + json_real(bias_from_field(s.h)) +
           ", \"lambda_plus\": " + json_real(s.lambda_plus) +
           ", \"lambda_minus\": " + json_real(s.lambda_minus) +
           ", \"overlap_sq\": " + json_real(s.overlap_sq) + "}";
  });
}

void write_samples_csv(std::ostream& os, std::span<const std::int64_t> sums) {
  os << kSamplesHeader << '\n';
  for (std::size_t k = 0; k < sums.size(); ++k) os << k << ',' << sums[k] << '\n';
}

std::vector<std::int64_t> read_samples_csv(std::istream& is) {
  std::vector<std::int64_t> out;
  for (const auto& c : read_table(is, kSamplesHeader)) {
    if (parse_int(c[0]) != static_cast<std::int64_t>(out.size())) {
      throw Error(Errc::ParseError, "sample indices must be 0, 1, 2, ...");
    }
    out.push_back(parse_int(c[1]));
  }
  return out;
}

}  // namespace mldp
