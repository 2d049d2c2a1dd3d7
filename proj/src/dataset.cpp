#include "repscape/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "repscape/error.hpp"
#include "repscape/format.hpp"
#include "repscape/random.hpp"

namespace repscape {

namespace {

bool valid_lat(double lat) { return lat >= -90.0 && lat <= 90.0; }
bool valid_lon(double lon) { return lon >= -180.0 && lon < 180.0; }

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::optional<double> parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

Dataset::Dataset(std::vector<Region> regions, std::vector<VariableSpec> variables, std::vector<double> values,
                 std::optional<std::vector<ColumnScaling>> normalization)
    : regions_(std::move(regions)),
      variables_(std::move(variables)),
      values_(std::move(values)),
      normalization_(std::move(normalization)) {
  if (values_.size() != regions_.size() * variables_.size())
    throw DataError("invalid_dataset", "value matrix size does not match regions x variables");
  std::unordered_set<std::string_view> names;
  for (const auto& v : variables_) {
    if (v.name.empty()) throw DataError("invalid_dataset", "empty variable name");
    if (!names.insert(v.name).second) throw DataError("invalid_dataset", "duplicate variable name '" + v.name + "'");
    if (v.declared_range && !(v.declared_range->first < v.declared_range->second))
      throw DataError("invalid_dataset", "declared range of '" + v.name + "' must have min < max");
  }
  region_index_.reserve(regions_.size());
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    const auto& r = regions_[i];
    if (!valid_lat(r.lat) || !valid_lon(r.lon))
      throw DataError("invalid_dataset", "region '" + r.id + "' has out-of-range coordinates");
    if (!region_index_.emplace(r.id, i).second)
      throw DataError("invalid_dataset", "duplicate region id '" + r.id + "'");
  }
  for (double x : values_)
    if (!std::isfinite(x)) throw DataError("invalid_dataset", "non-finite value");
  if (normalization_ && normalization_->size() != variables_.size())
    throw DataError("invalid_dataset", "normalization metadata does not match variable count");
}

std::optional<std::size_t> Dataset::find_region(std::string_view id) const {
  const auto it = region_index_.find(std::string(id));
  if (it == region_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Dataset::find_variable(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].name == name) return i;
  return std::nullopt;
}

std::vector<std::string> Dataset::variable_names() const {
  std::vector<std::string> out;
  out.reserve(variables_.size());
  for (const auto& v : variables_) out.push_back(v.name);
  return out;
}

FilterPredicate parse_filter(std::string_view text) {
  const auto colon = text.rfind(':');
  const auto dots = text.find("..", colon == std::string_view::npos ? 0 : colon);
  if (colon == std::string_view::npos || colon == 0 || dots == std::string_view::npos)
    throw UsageError("filter '" + std::string(text) + "' is not of the form var:lo..hi");
  const auto lo = parse_number(text.substr(colon + 1, dots - colon - 1));
  const auto hi = parse_number(text.substr(dots + 2));
  if (!lo || !hi) throw UsageError("filter '" + std::string(text) + "' has non-numeric bounds");
  if (*lo > *hi) throw UsageError("filter '" + std::string(text) + "' has lo > hi");
  return {std::string(text.substr(0, colon)), *lo, *hi};
}

std::vector<FilterPredicate> parse_filters(std::string_view text) {
  std::vector<FilterPredicate> out;
  if (text.empty()) return out;
  for (auto term : split_commas(text))
    if (!term.empty()) out.push_back(parse_filter(term));
  return out;
}

std::string format_filter(const FilterPredicate& p) {
  return p.variable + ":" + format_double(p.lo) + ".." + format_double(p.hi);
}

Dataset ingest_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IngestError(0, "header", "empty input");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_commas(line);
  if (header.size() < 4 || header[0] != "region_id" || header[1] != "lat" || header[2] != "lon")
    throw IngestError(0, "header", "expected region_id,lat,lon followed by at least one variable");

  std::vector<VariableSpec> variables;
  std::vector<std::string> columns;
  for (auto h : header) columns.emplace_back(h);
  std::unordered_set<std::string> seen;
  for (std::size_t c = 3; c < header.size(); ++c) {
    if (header[c].empty()) throw IngestError(0, "header", "empty variable name at position " + std::to_string(c + 1));
    if (!seen.insert(columns[c]).second) throw IngestError(0, columns[c], "duplicate variable name");
    variables.push_back({columns[c], VariableKind::continuous, std::nullopt});
  }

  std::vector<Region> regions;
  std::vector<double> values;
  std::unordered_set<std::string> ids;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const auto fields = split_commas(line);
    if (fields.size() != header.size())
      throw IngestError(row, fields.size() < header.size() ? columns[fields.size()] : "<extra>",
                        "expected " + std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
    Region r;
    r.id = std::string(fields[0]);
    if (r.id.empty()) throw IngestError(row, "region_id", "empty id");
    if (!ids.insert(r.id).second) throw IngestError(row, "region_id", "duplicate id '" + r.id + "'");
    const auto lat = parse_number(fields[1]);
    if (!lat) throw IngestError(row, "lat", "non-numeric value '" + std::string(fields[1]) + "'");
    if (!valid_lat(*lat)) throw IngestError(row, "lat", "latitude out of range [-90, 90]");
    const auto lon = parse_number(fields[2]);
    if (!lon) throw IngestError(row, "lon", "non-numeric value '" + std::string(fields[2]) + "'");
    if (!valid_lon(*lon)) throw IngestError(row, "lon", "longitude out of range [-180, 180)");
    r.lat = *lat;
    r.lon = *lon;
    for (std::size_t c = 3; c < fields.size(); ++c) {
      const auto v = parse_number(fields[c]);
      if (!v)
        throw IngestError(row, columns[c],
                          fields[c].empty() ? "missing value" : "non-numeric value '" + std::string(fields[c]) + "'");
      values.push_back(*v);
    }
    regions.push_back(std::move(r));
  }
  if (regions.empty()) throw IngestError(1, "region_id", "no data rows");
  return Dataset(std::move(regions), std::move(variables), std::move(values));
}

Dataset ingest_csv_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return ingest_csv(in);
}

void write_csv(const Dataset& d, std::ostream& out) {
  const Dataset native = denormalize(d);
  out << "region_id,lat,lon";
  for (const auto& v : native.variables()) out << ',' << v.name;
  out << '\n';
  for (std::size_t i = 0; i < native.rows(); ++i) {
    const auto& r = native.regions()[i];
    out << r.id << ',' << format_double(r.lat) << ',' << format_double(r.lon);
    for (double x : native.row(i)) out << ',' << format_double(x);
    out << '\n';
  }
}

std::string write_csv_text(const Dataset& d) {
  std::ostringstream out;
  write_csv(d, out);
  return out.str();
}

Dataset apply_filter(const Dataset& d, const std::vector<FilterPredicate>& preds) {
  const Dataset native = denormalize(d);
  std::vector<std::pair<std::size_t, const FilterPredicate*>> resolved;
  for (const auto& p : preds) {
    const auto col = native.find_variable(p.variable);
    if (!col) throw DataError("unknown_variable", "filter references unknown variable '" + p.variable + "'");
    if (p.lo > p.hi) throw DataError("invalid_filter", "filter on '" + p.variable + "' has lo > hi");
    resolved.emplace_back(*col, &p);
  }

  std::vector<Region> regions;
  std::vector<double> values;
  for (std::size_t i = 0; i < native.rows(); ++i) {
    const bool keep = std::all_of(resolved.begin(), resolved.end(), [&](const auto& rp) {
      const double x = native.at(i, rp.first);
      return x >= rp.second->lo && x <= rp.second->hi;
    });
    if (!keep) continue;
    regions.push_back(native.regions()[i]);
    const auto row = native.row(i);
    values.insert(values.end(), row.begin(), row.end());
  }
  if (regions.empty()) throw DataError("empty_after_filter", "no regions remain after applying the filter");
  return Dataset(std::move(regions), native.variables(), std::move(values));
}

Dataset select_variables(const Dataset& d, const std::vector<std::string>& names) {
  if (names.empty()) return d;
  std::vector<std::size_t> cols;
  for (const auto& n : names) {
    const auto c = d.find_variable(n);
    if (!c) throw DataError("unknown_variable", "unknown variable '" + n + "'");
    if (std::find(cols.begin(), cols.end(), *c) != cols.end())
      throw UsageError("variable '" + n + "' selected twice");
    cols.push_back(*c);
  }
  std::vector<VariableSpec> vars;
  std::optional<std::vector<ColumnScaling>> norm;
  if (d.normalization()) norm.emplace();
  for (auto c : cols) {
    vars.push_back(d.variables()[c]);
    if (norm) norm->push_back((*d.normalization())[c]);
  }
  std::vector<double> values;
  values.reserve(d.rows() * cols.size());
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (auto c : cols) values.push_back(d.at(i, c));
  return Dataset(d.regions(), std::move(vars), std::move(values), std::move(norm));
}

Dataset denormalize(const Dataset& d) {
  if (!d.normalization()) return d;
  const auto& scaling = *d.normalization();
  std::vector<double> values(d.values());
  const std::size_t cols = d.cols();
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = scaling[i % cols].invert(values[i]);
  return Dataset(d.regions(), d.variables(), std::move(values));
}

Dataset normalize_columns(const Dataset& d) {
  const Dataset native = denormalize(d);
  const std::size_t cols = native.cols();
  std::vector<ColumnScaling> scaling(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    double lo = native.at(0, c), hi = lo;
    for (std::size_t i = 1; i < native.rows(); ++i) {
      lo = std::min(lo, native.at(i, c));
      hi = std::max(hi, native.at(i, c));
    }
    scaling[c] = {lo, hi, !(hi > lo)};
  }
  std::vector<double> values(native.values());
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = std::clamp(scaling[i % cols].apply(values[i]), 0.0, 1.0);
  return Dataset(native.regions(), native.variables(), std::move(values), std::move(scaling));
}

std::vector<std::size_t> degenerate_columns(const Dataset& d) {
  std::vector<std::size_t> out;
  if (!d.normalization()) return out;
  for (std::size_t c = 0; c < d.cols(); ++c)
    if ((*d.normalization())[c].degenerate) out.push_back(c);
  return out;
}

std::vector<double> normalize_row(const Dataset& normalized, std::span<const double> native) {
  if (native.size() != normalized.cols())
    throw DataError("dimension_mismatch", "row has " + std::to_string(native.size()) + " values, expected " +
                                              std::to_string(normalized.cols()));
  std::vector<double> out(native.begin(), native.end());
  if (normalized.normalization())
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = (*normalized.normalization())[c].apply(out[c]);
  return out;
}

Dataset subsample_rows(const Dataset& d, std::size_t count, std::uint64_t seed) {
  if (count == 0 || count > d.rows())
    throw UsageError("subsample count must be in [1, " + std::to_string(d.rows()) + "]");
  std::vector<std::size_t> idx(d.rows());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) std::swap(idx[i], idx[i + uniform_index(rng, idx.size() - i)]);
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  std::vector<Region> regions;
  std::vector<double> values;
  for (auto i : idx) {
    regions.push_back(d.regions()[i]);
    const auto row = d.row(i);
    values.insert(values.end(), row.begin(), row.end());
  }
  return Dataset(std::move(regions), d.variables(), std::move(values), d.normalization());
}

}  // namespace repscape
