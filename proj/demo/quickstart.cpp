// Fit the bundled stand-in table, then print fit measures, the influence
// ranking and the strongest interaction.
//
//   ./build/brt_demo data/standin_model_table.csv

#include <iostream>

#include "brt/brt.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: brt_demo MODEL_TABLE.csv\n";
    return 2;
  }
  try {
    const brt::Dataset data = brt::load_model_table_file(argv[1]);

    brt::BoostConfig config;  // 50k trees at rate 1e-4, six-node trees
    config.n_trees = 5000;
    config.learn_rate = 0.001;
    const brt::BoostedModel model = brt::fit_ensemble(data, config);

    const auto predicted = model.predict_batch(data.features);
    const brt::FitReport fit = brt::fit_report(data.response, predicted);
    std::cout << "MSE " << brt::format_fixed(fit.mse, 5) << "  R-sq "
              << brt::format_fixed(fit.r_squared.value_or(0.0), 5) << '\n';

    const brt::InfluenceReport influence = brt::relative_influence(model);
    for (std::size_t j : influence.ranking()) {
      std::cout << "  " << influence.feature_names[j] << ' '
                << brt::format_fixed(influence.percent[j], 1) << "%\n";
    }

    const brt::InteractionReport pairs = brt::interaction_report(model, data);
    const brt::PairScore top = pairs.ranked_pairs().front();
    std::cout << "strongest interaction: " << pairs.feature_names[top.j] << " x "
              << pairs.feature_names[top.k] << " (" << brt::format_fixed(top.score, 2) << ")\n";
  } catch (const brt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
