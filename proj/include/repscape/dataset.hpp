#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace repscape {

struct Region {
  std::string id;
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180)
};

enum class VariableKind { continuous, categorical };

struct VariableSpec {
  std::string name;
  VariableKind kind = VariableKind::continuous;
  std::optional<std::pair<double, double>> declared_range;
};

/// Min/max captured for one column at normalization time. A degenerate
/// column (max == min) normalizes to all zeros.
struct ColumnScaling {
  double min = 0.0;
  double max = 0.0;
  bool degenerate = false;

  double apply(double x) const { return degenerate ? 0.0 : (x - min) / (max - min); }
  double invert(double y) const { return degenerate ? min : min + y * (max - min); }
};

/// Immutable region x variable table. Values are row-major. When
/// `normalization()` is set, every stored value lies in [0, 1] and the
/// per-column scaling recovers native units.
class Dataset {
 public:
  Dataset(std::vector<Region> regions, std::vector<VariableSpec> variables, std::vector<double> values,
          std::optional<std::vector<ColumnScaling>> normalization = std::nullopt);

  std::size_t rows() const noexcept { return regions_.size(); }
  std::size_t cols() const noexcept { return variables_.size(); }

  const std::vector<Region>& regions() const noexcept { return regions_; }
  const std::vector<VariableSpec>& variables() const noexcept { return variables_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::optional<std::vector<ColumnScaling>>& normalization() const noexcept { return normalization_; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols(), cols()}; }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }

  std::optional<std::size_t> find_region(std::string_view id) const;
  std::optional<std::size_t> find_variable(std::string_view name) const;
  std::vector<std::string> variable_names() const;

  bool is_normalized() const noexcept { return normalization_.has_value(); }

 private:
  std::vector<Region> regions_;
  std::vector<VariableSpec> variables_;
  std::vector<double> values_;
  std::optional<std::vector<ColumnScaling>> normalization_;
  std::unordered_map<std::string, std::size_t> region_index_;
};

/// Inclusive range predicate on one variable, in native units.
struct FilterPredicate {
  std::string variable;
  double lo = 0.0;
  double hi = 0.0;
};

/// Parses `var:lo..hi`.
FilterPredicate parse_filter(std::string_view text);

/// Parses a comma-separated list of `var:lo..hi` terms.
std::vector<FilterPredicate> parse_filters(std::string_view text);

std::string format_filter(const FilterPredicate& p);

Dataset ingest_csv(std::istream& in);
Dataset ingest_csv_text(std::string_view text);

/// Writes the dataset in native units (denormalizing if needed) with
/// 17 significant digits.
void write_csv(const Dataset& d, std::ostream& out);
std::string write_csv_text(const Dataset& d);

/// Rows satisfying every predicate (conjunction, inclusive bounds).
/// Throws DataError `unknown_variable` or `empty_after_filter`.
Dataset apply_filter(const Dataset& d, const std::vector<FilterPredicate>& preds);

/// Keeps only the named columns, in the given order. An empty list keeps
/// everything. Throws DataError `unknown_variable`.
Dataset select_variables(const Dataset& d, const std::vector<std::string>& names);

/// Min-max maps every column into [0, 1]. Operates on native values: an
/// already-normalized input is denormalized first.
Dataset normalize_columns(const Dataset& d);

/// Native-unit copy of a normalized dataset (identity on native input).
Dataset denormalize(const Dataset& d);

/// Indices of columns flagged degenerate (constant) by normalization.
std::vector<std::size_t> degenerate_columns(const Dataset& d);

/// Maps a native-unit row through the dataset's normalization.
std::vector<double> normalize_row(const Dataset& normalized, std::span<const double> native);

/// Uniform row subsample without replacement, preserving row order.
Dataset subsample_rows(const Dataset& d, std::size_t count, std::uint64_t seed);

}  // namespace repscape
