#pragma once

// Builds the food-inflation model table from raw annual series.
//
// Required raw series (file stem -> columns):
//
//   cpi_food              year,value                     CPI-IW food index
//   monsoon_rainfall      year,rainfall_mm,long_term_mean_mm
//   msp_prices            year,<crop>...                 minimum support prices
//   crop_production       year,<crop>...                 production quantities
//   fao_food_price_index  year,value                     USD-based FAO index
//   fx_inr_usd            year,value                     INR per USD, annual mean
//   fiscal_deficit        year,combined_deficit,gdp
//   farm_wages            year,ploughing,sowing,transplanting,weeding,harvesting
//   agri_input_prices     year,<item>...                 WPI item prices
//   agri_input_weights    item,weight
//   pfce_food             year,pulses,oils_oilseeds,milk_products,meat_egg_fish,total_food
//
// Column construction:
//
//   FCPI        YoY of cpi_food
//   MonsDev     percent deviation of rainfall from its long-term mean
//   MSP         YoY of the production-weighted MSP index (base FY05)
//   FAO         YoY of the FAO index converted to INR
//   FD          100 * combined_deficit / gdp
//   FWI         YoY of the farm wage index: unweighted mean of the five
//               operation wages, rebased to FY05
//   AgrilInput  YoY of the weighted non-labour input price index (base FY05)
//   ProteinExp  YoY of the protein-rich share of food expenditure
//
// A year enters the table when FCPI is defined and the year lies in the
// requested window. Predictor cells that cannot be computed for that year are
// left missing.

#include <algorithm>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "brt/dataset.hpp"
#include "brt/error.hpp"
#include "brt/model_table.hpp"
#include "brt/numfmt.hpp"
#include "brt/transforms.hpp"

namespace brt {

enum class MspWeighting { base_year, annual };

struct AssemblyOptions {
  int first_year = 1992;
  int last_year = 2016;
  int base_year = 2005;
  MspWeighting msp_weighting = MspWeighting::base_year;
  int monsoon_lag = 0;  // years; MonsDev(t) uses rainfall of t - lag
};

struct ProvenanceEntry {
  std::string column;
  std::string transform;
  std::string sources;
};

struct AssemblyResult {
  Dataset data;
  std::vector<ProvenanceEntry> provenance;
  std::vector<int> drought_years;  // within the window
};

inline const std::vector<std::string>& farm_wage_operations() {
  static const std::vector<std::string> ops = {"ploughing", "sowing", "transplanting", "weeding",
                                               "harvesting"};
  return ops;
}

inline const std::vector<std::string>& protein_items() {
  static const std::vector<std::string> items = {"pulses", "oils_oilseeds", "milk_products",
                                                 "meat_egg_fish"};
  return items;
}

namespace detail {

inline const AnnualTable& annual_series(const SeriesTable& t, const std::string& name,
                                        const std::vector<std::string>& columns) {
  auto it = t.annual.find(name);
  if (it == t.annual.end()) throw DataError("missing series: " + name);
  for (const std::string& c : columns) {
    if (!it->second.has_column(c)) throw DataError("series " + name + " lacks column " + c);
  }
  return it->second;
}

inline std::map<std::string, AnnualSeries> all_columns(const AnnualTable& t) {
  std::map<std::string, AnnualSeries> out;
  for (const std::string& c : t.columns) out[c] = t.column(c);
  return out;
}

// Row-wise combination over years where every listed column is present.
template <typename Fn>
AnnualSeries combine_rows(const AnnualTable& t, const std::vector<std::string>& columns, Fn fn) {
  std::vector<std::size_t> idx;
  for (const std::string& c : columns) {
    idx.push_back(static_cast<std::size_t>(
        std::find(t.columns.begin(), t.columns.end(), c) - t.columns.begin()));
  }
  AnnualSeries out;
  std::vector<double> values(idx.size());
  for (const auto& [year, row] : t.rows) {
    bool complete = true;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      values[i] = row[idx[i]];
      if (is_missing(values[i])) complete = false;
    }
    if (complete) out[year] = fn(values);
  }
  return out;
}

inline AnnualSeries rebase(const AnnualSeries& s, int base_year, const std::string& what) {
  auto it = s.find(base_year);
  if (it == s.end()) throw DataError("base year " + fy_label(base_year) + " missing for " + what);
  if (!(it->second > 0.0)) throw DataError("nonpositive index value at " + fy_label(base_year));
  AnnualSeries out;
  for (const auto& [year, v] : s) out[year] = 100.0 * v / it->second;
  return out;
}

}  // namespace detail

inline AssemblyResult assemble_model_table(const SeriesTable& series,
                                           const AssemblyOptions& options = {}) {
  // Check presence of everything up front so the first missing series is named.
  const std::vector<std::string> required = {
      "cpi_food",        "monsoon_rainfall",  "msp_prices",         "crop_production",
      "fao_food_price_index", "fx_inr_usd",   "fiscal_deficit",     "farm_wages",
      "agri_input_prices",    "agri_input_weights", "pfce_food"};
  for (const std::string& name : required) {
    if (!series.contains(name)) throw DataError("missing series: " + name);
  }

  const AnnualTable& cpi = detail::annual_series(series, "cpi_food", {"value"});
  const AnnualTable& rain =
      detail::annual_series(series, "monsoon_rainfall", {"rainfall_mm", "long_term_mean_mm"});
  const AnnualTable& msp = detail::annual_series(series, "msp_prices", {});
  const AnnualTable& production = detail::annual_series(series, "crop_production", {});
  const AnnualTable& fao = detail::annual_series(series, "fao_food_price_index", {"value"});
  const AnnualTable& fx = detail::annual_series(series, "fx_inr_usd", {"value"});
  const AnnualTable& deficit =
      detail::annual_series(series, "fiscal_deficit", {"combined_deficit", "gdp"});
  const AnnualTable& wages = detail::annual_series(series, "farm_wages", farm_wage_operations());
  const AnnualTable& inputs = detail::annual_series(series, "agri_input_prices", {});
  auto protein_cols = protein_items();
  protein_cols.push_back("total_food");
  const AnnualTable& pfce = detail::annual_series(series, "pfce_food", protein_cols);
  auto weights_it = series.weights.find("agri_input_weights");
  if (weights_it == series.weights.end()) {
    throw DataError("series agri_input_weights must have header item,weight");
  }

  std::map<std::string, AnnualSeries> columns;
  columns["FCPI"] = yoy_change(cpi.column("value"));

  std::map<int, MonsoonYear> monsoon;
  {
    const AnnualSeries rainfall = rain.column("rainfall_mm");
    const AnnualSeries long_term = rain.column("long_term_mean_mm");
    for (const auto& [year, r] : rainfall) {
      auto m = long_term.find(year);
      if (m != long_term.end()) monsoon[year] = monsoon_deviation(r, m->second);
    }
  }
  for (const auto& [year, m] : monsoon) columns["MonsDev"][year + options.monsoon_lag] = m.deviation;

  {
    const auto prices = detail::all_columns(msp);
    const auto quantities = detail::all_columns(production);
    for (const auto& [crop, q] : quantities) {
      if (prices.count(crop) == 0) throw DataError("weighted item '" + crop + "' has no price series");
    }
    for (const auto& [crop, p] : prices) {
      if (quantities.count(crop) == 0) throw DataError("crop '" + crop + "' has no production series");
    }
    const AnnualSeries index =
        options.msp_weighting == MspWeighting::base_year
            ? weighted_index(prices, shares_at(quantities, options.base_year), options.base_year)
            : [&] {
                std::map<std::string, AnnualSeries> annual;
                for (const auto& [year, unused] : production.rows) {
                  bool complete = true;
                  for (const auto& [crop, q] : quantities) complete = complete && q.count(year);
                  if (!complete) continue;
                  for (const auto& [crop, share] : shares_at(quantities, year)) {
                    annual[crop][year] = share;
                  }
                }
                return weighted_index(prices, annual, options.base_year);
              }();
    columns["MSP"] = yoy_change(index);
  }

  columns["FAO"] = yoy_change(fao_inr(fao.column("value"), fx.column("value")));

  columns["FD"] = detail::combine_rows(deficit, {"combined_deficit", "gdp"}, [](const auto& v) {
    if (!(v[1] > 0.0)) throw DataError("nonpositive GDP in fiscal_deficit");
    return 100.0 * v[0] / v[1];
  });

  {
    const AnnualSeries mean_wage =
        detail::combine_rows(wages, farm_wage_operations(), [](const auto& v) {
          double s = 0.0;
          for (double x : v) s += x;
          return s / static_cast<double>(v.size());
        });
    columns["FWI"] = yoy_change(detail::rebase(mean_wage, options.base_year, "farm_wages"));
  }

  columns["AgrilInput"] =
      yoy_change(weighted_index(detail::all_columns(inputs), weights_it->second, options.base_year));

  columns["ProteinExp"] = yoy_change(detail::combine_rows(pfce, protein_cols, [](const auto& v) {
    if (!(v[4] > 0.0)) throw DataError("nonpositive total food expenditure in pfce_food");
    return (v[0] + v[1] + v[2] + v[3]) / v[4];
  }));

  AssemblyResult result;
  Dataset& d = result.data;
  d.response_name = "FCPI";
  d.feature_names = food_inflation_predictors();
  std::vector<double> row(d.feature_names.size());
  for (const auto& [year, fcpi] : columns["FCPI"]) {
    if (year < options.first_year || year > options.last_year) continue;
    for (std::size_t j = 0; j < d.feature_names.size(); ++j) {
      const AnnualSeries& col = columns[d.feature_names[j]];
      auto it = col.find(year);
      row[j] = it == col.end() ? kMissing : it->second;
    }
    d.years.push_back(year);
    d.response.push_back(fcpi);
    d.features.append_row(row);
  }
  if (d.rows() == 0) throw DataError("no fiscal years with a defined response in the window");
  for (std::size_t i = 1; i < d.years.size(); ++i) {
    if (d.years[i] != d.years[i - 1] + 1) {
      throw DataError("response series has a gap before " + fy_label(d.years[i]));
    }
  }

  for (const auto& [year, m] : monsoon) {
    if (m.drought && year >= options.first_year && year <= options.last_year) {
      result.drought_years.push_back(year);
    }
  }

  const std::string base = fy_label(options.base_year);
  const std::string lag = options.monsoon_lag == 0 ? "" : " lagged " + std::to_string(options.monsoon_lag) + "y";
  result.provenance = {
      {"FCPI", "yoy_change", "cpi_food.value"},
      {"MonsDev", "monsoon_deviation" + lag, "monsoon_rainfall.rainfall_mm;monsoon_rainfall.long_term_mean_mm"},
      {"MSP",
       std::string("yoy_change(weighted_index base ") + base +
           (options.msp_weighting == MspWeighting::base_year ? ", base-year production shares)"
                                                              : ", annual production shares)"),
       "msp_prices;crop_production"},
      {"FAO", "yoy_change(fao_inr)", "fao_food_price_index.value;fx_inr_usd.value"},
      {"FD", "100*combined_deficit/gdp", "fiscal_deficit.combined_deficit;fiscal_deficit.gdp"},
      {"FWI", "yoy_change(mean of operation wages rebased " + base + ")", "farm_wages"},
      {"AgrilInput", "yoy_change(weighted_index base " + base + ")",
       "agri_input_prices;agri_input_weights"},
      {"ProteinExp", "yoy_change(protein share of food expenditure)", "pfce_food"},
  };
  return result;
}

inline void write_provenance(const std::vector<ProvenanceEntry>& entries, std::ostream& out) {
  out << "column,transform,sources\n";
  for (const ProvenanceEntry& e : entries) {
    out << e.column << ",\"" << e.transform << "\"," << e.sources << '\n';
  }
}

}  // namespace brt
