#pragma once

// Annual-series transforms used to build the model table from raw sources.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "brt/error.hpp"
#include "brt/model_table.hpp"

namespace brt {

// Percent change on the previous year; the first year (and any year whose
// predecessor is absent) is dropped.
inline AnnualSeries yoy_change(const AnnualSeries& series) {
  for (const auto& [year, v] : series) {
    if (!(v > 0.0)) throw DataError("nonpositive index value at " + fy_label(year));
  }
  AnnualSeries out;
  for (auto it = series.begin(); it != series.end(); ++it) {
    auto prev = series.find(it->first - 1);
    if (prev == series.end()) continue;
    out[it->first] = 100.0 * (it->second - prev->second) / prev->second;
  }
  if (out.empty()) throw DataError("year-on-year change needs at least two consecutive years");
  return out;
}

namespace detail {

inline void require_prices_for_weights(const std::map<std::string, AnnualSeries>& prices,
                                       const std::vector<std::string>& weighted) {
  for (const std::string& item : weighted) {
    if (prices.count(item) == 0) throw DataError("weighted item '" + item + "' has no price series");
  }
}

inline double price_at(const std::map<std::string, AnnualSeries>& prices, const std::string& item,
                       int year) {
  const AnnualSeries& s = prices.at(item);
  auto it = s.find(year);
  if (it == s.end()) return kMissing;
  if (!(it->second > 0.0)) throw DataError("nonpositive price for '" + item + "' at " + fy_label(year));
  return it->second;
}

}  // namespace detail

// 100 * sum_c w_c p_c(t) / sum_c w_c p_c(base) with fixed weights. Years where
// any weighted item lacks a price are omitted. Items priced but not weighted
// are ignored.
inline AnnualSeries weighted_index(const std::map<std::string, AnnualSeries>& prices,
                                   const std::map<std::string, double>& weights, int base_year) {
  std::vector<std::string> items;
  for (const auto& [item, w] : weights) {
    if (w < 0.0) throw DataError("negative weight for '" + item + "'");
    items.push_back(item);
  }
  if (items.empty()) throw DataError("weighted index needs at least one weight");
  detail::require_prices_for_weights(prices, items);

  double base = 0.0;
  for (const std::string& item : items) {
    const double p = detail::price_at(prices, item, base_year);
    if (is_missing(p)) throw DataError("base year " + fy_label(base_year) + " missing for '" + item + "'");
    base += weights.at(item) * p;
  }
  if (!(base > 0.0)) throw DataError("weighted index base value is zero");

  AnnualSeries out;
  for (const auto& [year, unused] : prices.at(items.front())) {
    double num = 0.0;
    bool complete = true;
    for (const std::string& item : items) {
      const double p = detail::price_at(prices, item, year);
      if (is_missing(p)) {
        complete = false;
        break;
      }
      num += weights.at(item) * p;
    }
    if (complete) out[year] = 100.0 * num / base;
  }
  return out;
}

// Variant with weights varying by year: each year's weights apply to both
// that year's prices and the base-year prices.
inline AnnualSeries weighted_index(const std::map<std::string, AnnualSeries>& prices,
                                   const std::map<std::string, AnnualSeries>& annual_weights,
                                   int base_year) {
  std::vector<std::string> items;
  for (const auto& [item, w] : annual_weights) items.push_back(item);
  if (items.empty()) throw DataError("weighted index needs at least one weight");
  detail::require_prices_for_weights(prices, items);
  for (const std::string& item : items) {
    if (is_missing(detail::price_at(prices, item, base_year))) {
      throw DataError("base year " + fy_label(base_year) + " missing for '" + item + "'");
    }
  }

  AnnualSeries out;
  for (const auto& [year, unused] : prices.at(items.front())) {
    double num = 0.0;
    double den = 0.0;
    bool complete = true;
    for (const std::string& item : items) {
      const double p = detail::price_at(prices, item, year);
      const auto w = annual_weights.at(item).find(year);
      if (is_missing(p) || w == annual_weights.at(item).end()) {
        complete = false;
        break;
      }
      if (w->second < 0.0) throw DataError("negative weight for '" + item + "'");
      num += w->second * p;
      den += w->second * detail::price_at(prices, item, base_year);
    }
    if (complete && den > 0.0) out[year] = 100.0 * num / den;
  }
  return out;
}

// Production shares of each item in one year.
inline std::map<std::string, double> shares_at(const std::map<std::string, AnnualSeries>& quantities,
                                               int year) {
  std::map<std::string, double> shares;
  double total = 0.0;
  for (const auto& [item, s] : quantities) {
    auto it = s.find(year);
    if (it == s.end()) throw DataError("production of '" + item + "' missing at " + fy_label(year));
    if (it->second < 0.0) throw DataError("negative production for '" + item + "'");
    shares[item] = it->second;
    total += it->second;
  }
  if (!(total > 0.0)) throw DataError("total production is zero at " + fy_label(year));
  for (auto& [item, v] : shares) v /= total;
  return shares;
}

// USD-denominated index times INR per USD, year by year.
inline AnnualSeries fao_inr(const AnnualSeries& usd_index, const AnnualSeries& inr_per_usd) {
  std::vector<int> missing;
  for (const auto& [year, v] : usd_index) {
    if (inr_per_usd.count(year) == 0) missing.push_back(year);
  }
  for (const auto& [year, v] : inr_per_usd) {
    if (usd_index.count(year) == 0) missing.push_back(year);
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    std::string msg = "year mismatch between price index and exchange rate; missing:";
    for (int y : missing) msg += " " + fy_label(y);
    throw DataError(msg);
  }
  AnnualSeries out;
  for (const auto& [year, v] : usd_index) {
    const double fx = inr_per_usd.at(year);
    if (!(v > 0.0) || !(fx > 0.0)) throw DataError("nonpositive index value at " + fy_label(year));
    out[year] = v * fx;
  }
  return out;
}

// Monsoon rainfall below the long-term mean by more than this is a drought.
inline constexpr double kDroughtDeviation = -10.0;

struct MonsoonYear {
  double deviation = 0.0;  // percent of the long-term mean
  bool drought = false;
};

inline MonsoonYear monsoon_deviation(double rainfall, double long_term_mean) {
  if (!(long_term_mean > 0.0)) throw DataError("long-term mean rainfall must be positive");
  const double dev = 100.0 * (rainfall - long_term_mean) / long_term_mean;
  return {dev, dev < kDroughtDeviation};
}

inline std::map<int, MonsoonYear> monsoon_deviation(const AnnualSeries& rainfall,
                                                    double long_term_mean) {
  std::map<int, MonsoonYear> out;
  for (const auto& [year, r] : rainfall) out[year] = monsoon_deviation(r, long_term_mean);
  return out;
}

}  // namespace brt
