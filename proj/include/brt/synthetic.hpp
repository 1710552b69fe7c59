#pragma once

// Synthetic stand-in for the FY92-FY16 food-inflation model table.
//
// Same schema, row count, units and rough ranges as the real table, with a
// known generating function. It is NOT the replication data: use it for
// exercising the pipeline, not for drawing conclusions about food prices.
//
//   FCPI = 1 + 0.30 MSP + 0.22 FWI - 0.08 MonsDev - 0.012 MSP*MonsDev
//            + 0.30 ProteinExp + 0.25 (FD - 8) + 0.08 AgrilInput
//            + 0.005 FAO + N(0, 0.3^2)
//
// ProteinExp is missing from FY14 on, mirroring the real source.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "brt/dataset.hpp"
#include "brt/model_table.hpp"
#include "brt/sampling.hpp"

namespace brt {

inline constexpr std::uint64_t kStandinSeed = 20170401;

inline Dataset make_standin_model_table(std::uint64_t seed = kStandinSeed) {
  RandomStream rng(seed);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  auto normal = [&]() {
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };
  auto round2 = [](double v) { return std::round(v * 100.0) / 100.0; };

  Dataset d;
  d.response_name = "FCPI";
  d.feature_names = food_inflation_predictors();
  for (int year = 1992; year <= 2016; ++year) {
    const double mons = round2(uniform(-20.0, 12.0));
    const double msp = round2(uniform(2.0, 20.0));
    const double fao = round2(uniform(-20.0, 35.0));
    const double fd = round2(uniform(6.0, 10.0));
    const double fwi = round2(uniform(3.0, 20.0));
    const double agri = round2(uniform(0.0, 14.0));
    const double protein_draw = round2(uniform(-3.0, 5.0));
    const double protein = year >= 2014 ? kMissing : protein_draw;
    const double protein_effect = year >= 2014 ? 0.0 : 0.30 * protein;
    const double fcpi = 1.0 + 0.30 * msp + 0.22 * fwi - 0.08 * mons - 0.012 * msp * mons +
                        protein_effect + 0.25 * (fd - 8.0) + 0.08 * agri + 0.005 * fao +
                        0.3 * normal();
    d.years.push_back(year);
    d.response.push_back(round2(fcpi));
    const std::vector<double> row = {mons, msp, fao, fd, fwi, agri, protein};
    d.features.append_row(row);
  }
  return d;
}

}  // namespace brt
