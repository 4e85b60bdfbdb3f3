#include "synthpanel/panel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "synthpanel/csv.hpp"
#include "synthpanel/errors.hpp"

namespace synthpanel {

std::size_t PanelDataset::unit_index(const std::string& unit_id) const {
  for (std::size_t i = 0; i < units.size(); ++i)
    if (units[i].unit_id == unit_id) return i;
  throw validation_error("UnknownUnit", "unit '" + unit_id + "' not in panel");
}

bool PanelDataset::has_unit(const std::string& unit_id) const {
  for (const auto& u : units)
    if (u.unit_id == unit_id) return true;
  return false;
}

std::size_t PanelDataset::year_index(int year) const {
  const auto it = std::find(years.begin(), years.end(), year);
  if (it == years.end())
    throw validation_error("UnknownYear", "year " + std::to_string(year) + " not in panel");
  return static_cast<std::size_t>(it - years.begin());
}

void PanelDataset::check_invariants() const {
  const auto n = static_cast<Eigen::Index>(units.size());
  const auto t = static_cast<Eigen::Index>(years.size());
  if (outcome.rows() != n || outcome.cols() != t)
    throw validation_error("UnbalancedPanel", "outcome matrix is not units x years");
  for (const auto& [name, m] : covariates)
    if (m.rows() != n || m.cols() != t)
      throw validation_error("UnbalancedPanel",
                             "covariate '" + name + "' is not units x years");
  for (std::size_t i = 1; i < years.size(); ++i)
    if (years[i] != years[i - 1] + 1)
      throw validation_error("UnbalancedPanel", "years are not consecutive integers");
  if (!outcome.allFinite())
    throw validation_error("NonNumericValue", "outcome contains non-finite values");
  std::set<std::string> seen;
  for (const auto& u : units)
    if (!seen.insert(u.unit_id).second)
      throw validation_error("DuplicateUnitYear", "duplicate unit_id '" + u.unit_id + "'");
}

bool PanelDataset::operator==(const PanelDataset& other) const {
  if (years != other.years || metadata != other.metadata) return false;
  if (units.size() != other.units.size()) return false;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const auto& a = units[i];
    const auto& b = other.units[i];
    if (a.unit_id != b.unit_id || a.display_name != b.display_name ||
        a.country != b.country || a.capital_flag != b.capital_flag)
      return false;
  }
  if (outcome != other.outcome) return false;
  if (covariates.size() != other.covariates.size()) return false;
  for (const auto& [name, m] : covariates) {
    const auto it = other.covariates.find(name);
    if (it == other.covariates.end() || it->second != m) return false;
  }
  return true;
}

void ValidationReport::add(Issue::Severity severity, const std::string& code,
                           const std::string& message, const std::string& offending) {
  issues.push_back({severity, code, message, offending});
  if (severity == Issue::Severity::error) ok = false;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto& issue : issues) {
    out << (issue.severity == Issue::Severity::error ? "error" : "warning") << "["
        << issue.code << "] " << issue.message;
    if (!issue.offending.empty()) out << " (" << issue.offending << ")";
    out << "\n";
  }
  return out.str();
}

PanelDataset load_panel(const std::filesystem::path& path, const ColumnSchema& schema) {
  const auto table = csv::read_file(path);
  const std::size_t col_unit = table.column(schema.unit_id);
  const std::size_t col_name = table.column(schema.name);
  const std::size_t col_country = table.column(schema.country);
  const std::size_t col_year = table.column(schema.year);
  const std::size_t col_outcome = table.column(schema.outcome);
  std::optional<std::size_t> col_capital;
  if (!schema.capital.empty()) col_capital = table.column(schema.capital);

  std::vector<std::string> covariate_names = schema.covariates;
  if (covariate_names.empty()) {
    std::set<std::size_t> claimed = {col_unit, col_name, col_country, col_year, col_outcome};
    if (col_capital) claimed.insert(*col_capital);
    for (std::size_t c = 0; c < table.header.size(); ++c)
      if (claimed.count(c) == 0) covariate_names.push_back(table.header[c]);
  }
  std::vector<std::size_t> covariate_cols;
  covariate_cols.reserve(covariate_names.size());
  for (const auto& name : covariate_names) covariate_cols.push_back(table.column(name));

  // First pass: collect units and years.
  std::map<std::string, UnitInfo> unit_map;
  std::set<int> year_set;
  for (const auto& row : table.rows) {
    const std::string& uid = row[col_unit];
    const int year = static_cast<int>(csv::parse_long(row[col_year], "year"));
    year_set.insert(year);
    auto [it, inserted] = unit_map.try_emplace(uid);
    if (inserted) {
      it->second.unit_id = uid;
      it->second.display_name = row[col_name];
      it->second.country = row[col_country];
      if (col_capital)
        it->second.capital_flag = csv::parse_long(row[*col_capital], "capital") != 0;
    }
  }
  if (unit_map.empty()) throw validation_error("EmptyFile", "panel has no rows");

  PanelDataset ds;
  for (auto& [uid, info] : unit_map) ds.units.push_back(info);  // map order = sorted
  ds.years.assign(year_set.begin(), year_set.end());
  for (std::size_t i = 1; i < ds.years.size(); ++i)
    if (ds.years[i] != ds.years[i - 1] + 1)
      throw validation_error("UnbalancedPanel",
                             "years are not consecutive: gap before " +
                                 std::to_string(ds.years[i]));

  const auto n = static_cast<Eigen::Index>(ds.units.size());
  const auto t = static_cast<Eigen::Index>(ds.years.size());
  const double unset = std::numeric_limits<double>::quiet_NaN();
  ds.outcome = Eigen::MatrixXd::Constant(n, t, unset);
  for (const auto& name : covariate_names)
    ds.covariates[name] = Eigen::MatrixXd::Constant(n, t, unset);

  std::map<std::string, Eigen::Index> unit_row;
  for (Eigen::Index i = 0; i < n; ++i) unit_row[ds.units[i].unit_id] = i;

  // Second pass: fill cells, catching duplicates.
  for (const auto& row : table.rows) {
    const Eigen::Index i = unit_row[row[col_unit]];
    const int year = static_cast<int>(csv::parse_long(row[col_year], "year"));
    const Eigen::Index j = static_cast<Eigen::Index>(year - ds.years.front());
    const std::string context = row[col_unit] + "/" + std::to_string(year);
    if (!std::isnan(ds.outcome(i, j)))
      throw validation_error("DuplicateUnitYear", "duplicate row for " + context);
    ds.outcome(i, j) = csv::parse_double(row[col_outcome], context + " outcome");
    for (std::size_t c = 0; c < covariate_names.size(); ++c)
      ds.covariates[covariate_names[c]](i, j) =
          csv::parse_double(row[covariate_cols[c]], context + " " + covariate_names[c]);
  }

  // Balance check: every unit-year cell must be present.
  std::vector<std::string> missing;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < t; ++j)
      if (std::isnan(ds.outcome(i, j)))
        missing.push_back(ds.units[static_cast<std::size_t>(i)].unit_id + ", " +
                          std::to_string(ds.years[static_cast<std::size_t>(j)]));
  if (!missing.empty()) {
    std::string detail = "missing unit-year cells: ";
    const std::size_t shown = std::min<std::size_t>(missing.size(), 10);
    for (std::size_t k = 0; k < shown; ++k) {
      if (k) detail += "; ";
      detail += "(" + missing[k] + ")";
    }
    if (missing.size() > shown)
      detail += "; ... " + std::to_string(missing.size() - shown) + " more";
    throw validation_error("UnbalancedPanel", detail);
  }
  ds.check_invariants();
  return ds;
}

std::string render_panel(const PanelDataset& dataset) {
  std::ostringstream out;
  out << "unit_id,name,country,capital,year,outcome";
  for (const auto& [name, m] : dataset.covariates) out << "," << name;
  out << "\n";
  for (std::size_t i = 0; i < dataset.units.size(); ++i) {
    const auto& u = dataset.units[i];
    for (std::size_t j = 0; j < dataset.years.size(); ++j) {
      out << u.unit_id << "," << u.display_name << "," << u.country << ","
          << (u.capital_flag ? 1 : 0) << "," << dataset.years[j] << ","
          << csv::format_double(dataset.outcome(static_cast<Eigen::Index>(i),
                                                static_cast<Eigen::Index>(j)),
                                0);
      for (const auto& [name, m] : dataset.covariates)
        out << ","
            << csv::format_double(
                   m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), 0);
      out << "\n";
    }
  }
  return out.str();
}

void write_panel(const std::filesystem::path& path, const PanelDataset& dataset) {
  csv::write_file_atomic(path, render_panel(dataset));
}

int default_training_end(const std::vector<int>& years, int t0) {
  std::vector<int> pre;
  for (int y : years)
    if (y < t0) pre.push_back(y);
  if (pre.empty())
    throw validation_error("T0OutOfRange", "no pre-treatment years before " +
                                               std::to_string(t0));
  return pre[(pre.size() - 1) / 2];
}

ValidationReport validate_design(const PanelDataset& dataset, const StudyConfig& config) {
  ValidationReport report;
  if (dataset.years.empty() || dataset.units.empty()) {
    report.add(Issue::Severity::error, "EmptyPanel", "dataset has no units or years");
    return report;
  }
  const int y_min = dataset.years.front();
  const int y_max = dataset.years.back();

  if (config.treated_ids.empty())
    report.add(Issue::Severity::error, "NoTreatedUnits", "treated_ids is empty");
  for (const auto& uid : config.treated_ids)
    if (!dataset.has_unit(uid))
      report.add(Issue::Severity::error, "TreatedUnitAbsent",
                 "treated unit not in panel", uid);

  if (config.t0 <= y_min || config.t0 > y_max)
    report.add(Issue::Severity::error, "T0OutOfRange",
               "t0 = " + std::to_string(config.t0) + " outside (" +
                   std::to_string(y_min) + ", " + std::to_string(y_max) + "]");
  else {
    const int split = config.training_end.value_or(default_training_end(dataset.years, config.t0));
    // Both the training and validation segments must be nonempty.
    if (split < y_min || split >= config.t0 - 1)
      report.add(Issue::Severity::error, "TrainingSplitInvalid",
                 "training_end = " + std::to_string(split) +
                     " leaves an empty training or validation window");
  }

  if (config.donor_filter) {
    for (const auto& uid : config.treated_ids) {
      if (config.donor_filter->unit_ids.count(uid) > 0)
        report.add(Issue::Severity::error, "DonorTreatedOverlap",
                   "treated unit listed in donor_filter", uid);
    }
  }

  // Donor pool size after exclusions.
  std::size_t donors = 0;
  for (const auto& u : dataset.units) {
    if (config.treated_ids.count(u.unit_id) > 0) continue;
    if (config.donor_filter && !config.donor_filter->empty() &&
        !config.donor_filter->allows(u))
      continue;
    ++donors;
  }
  if (donors < 2)
    report.add(Issue::Severity::error, "DonorPoolTooSmall",
               "donor pool has " + std::to_string(donors) + " units, need >= 2");

  for (const auto& [name, m] : dataset.covariates) {
    const double spread = m.maxCoeff() - m.minCoeff();
    const double scale = std::max(std::abs(m.maxCoeff()), std::abs(m.minCoeff()));
    if (spread <= 1e-12 * std::max(scale, 1.0))
      report.add(Issue::Severity::warning, "NearConstantCovariate",
                 "covariate varies by less than 1e-12 of its scale", name);
  }
  return report;
}

StudyDesign build_study(const PanelDataset& dataset, const StudyConfig& config) {
  const auto report = validate_design(dataset, config);
  if (!report.ok)
    throw validation_error("InvalidDesign", "design validation failed:\n" + report.summary());

  StudyDesign design;
  design.dataset = dataset;
  design.config = config;
  design.training_end =
      config.training_end.value_or(default_training_end(dataset.years, config.t0));
  for (int y : dataset.years) {
    if (y < config.t0) {
      design.pre_years.push_back(y);
      if (y <= design.training_end)
        design.training_years.push_back(y);
      else
        design.validation_years.push_back(y);
    } else {
      design.post_years.push_back(y);
    }
  }
  for (const auto& u : dataset.units) {
    if (config.treated_ids.count(u.unit_id) > 0) continue;
    if (config.donor_filter && !config.donor_filter->empty() &&
        !config.donor_filter->allows(u))
      continue;
    design.donor_ids.push_back(u.unit_id);
  }
  std::sort(design.donor_ids.begin(), design.donor_ids.end());
  return design;
}

std::vector<std::string> StudyDesign::treated_ids_sorted() const {
  return std::vector<std::string>(config.treated_ids.begin(), config.treated_ids.end());
}

}  // namespace synthpanel
