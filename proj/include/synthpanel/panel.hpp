#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace synthpanel {

struct UnitInfo {
  std::string unit_id;
  std::string display_name;
  std::string country;
  bool capital_flag = false;
};

// Balanced unit x year grid of outcome and covariate observations.
// Rows are units (sorted by unit_id), columns are consecutive years.
struct PanelDataset {
  std::vector<UnitInfo> units;
  std::vector<int> years;
  Eigen::MatrixXd outcome;                       // units x years
  std::map<std::string, Eigen::MatrixXd> covariates;  // each units x years
  std::map<std::string, std::string> metadata;

  std::size_t n_units() const { return units.size(); }
  std::size_t n_years() const { return years.size(); }
  std::size_t unit_index(const std::string& unit_id) const;  // throws UnknownUnit
  std::size_t year_index(int year) const;                    // throws UnknownYear
  bool has_unit(const std::string& unit_id) const;

  // Checks the balanced-panel invariants; throws on violation.
  void check_invariants() const;

  bool operator==(const PanelDataset& other) const;
};

enum class Aggregation { mean, value_at_year, none };

struct PredictorSpec {
  std::string covariate;
  Aggregation aggregation = Aggregation::mean;
  int at_year = 0;  // used when aggregation == value_at_year
};

struct DonorFilter {
  std::set<std::string> countries;
  std::set<std::string> unit_ids;
  bool empty() const { return countries.empty() && unit_ids.empty(); }
  bool allows(const UnitInfo& unit) const {
    return countries.count(unit.country) > 0 || unit_ids.count(unit.unit_id) > 0;
  }
};

struct StudyConfig {
  std::set<std::string> treated_ids;
  int t0 = 0;                           // first treatment year
  std::optional<int> training_end;      // default: midpoint of pre years
  std::vector<PredictorSpec> predictor_spec;  // empty: all covariates, mean
  std::vector<int> outcome_lag_years;   // empty: 3 evenly spaced + last pre year
  std::optional<DonorFilter> donor_filter;
};

struct Issue {
  enum class Severity { error, warning };
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  std::string offending;  // unit/year context, may be empty
};

struct ValidationReport {
  bool ok = true;
  std::vector<Issue> issues;
  void add(Issue::Severity severity, const std::string& code,
           const std::string& message, const std::string& offending = "");
  std::string summary() const;
};

struct StudyDesign {
  PanelDataset dataset;
  StudyConfig config;
  std::vector<std::string> donor_ids;  // sorted, the J donors
  std::vector<int> pre_years;
  std::vector<int> post_years;
  std::vector<int> training_years;
  std::vector<int> validation_years;
  int training_end = 0;  // resolved split year

  std::vector<std::string> treated_ids_sorted() const;
};

// Column-mapping descriptor for load_panel. Covariates defaults to every
// column not otherwise claimed.
struct ColumnSchema {
  std::string unit_id = "unit_id";
  std::string name = "name";
  std::string country = "country";
  std::string year = "year";
  std::string outcome = "outcome";
  std::string capital;                   // optional 0/1 column
  std::vector<std::string> covariates;   // empty: auto-detect
};

PanelDataset load_panel(const std::filesystem::path& path,
                        const ColumnSchema& schema = ColumnSchema());
std::string render_panel(const PanelDataset& dataset);  // input format, full precision
void write_panel(const std::filesystem::path& path, const PanelDataset& dataset);

ValidationReport validate_design(const PanelDataset& dataset, const StudyConfig& config);
StudyDesign build_study(const PanelDataset& dataset, const StudyConfig& config);

// Resolved default split year: floor midpoint of the pre-period.
int default_training_end(const std::vector<int>& years, int t0);

}  // namespace synthpanel
