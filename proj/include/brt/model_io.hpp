#pragma once

// Text serialization of BoostedModel, format tag "brtm/1".
//
//   brtm/1
//   loss least_squares
//   n_trees 50000
//   learn_rate 0.0001
//   max_nodes 6
//   min_leaf_obs 3
//   subsample_fraction 0.95
//   seed 1
//   features MonsDev MSP FAO FD FWI AgrilInput ProteinExp
//   f0 7.43
//   stages 50000
//   stage <gamma> <node_count> <node> <node> ...
//   ...
//   end
//
// Nodes are listed in array order. A leaf is "L,<value>,<n_obs>"; a split is
// "S,<feature>,<threshold>,<improvement>,<l|r>,<left>,<right>,<value>,<n_obs>"
// where l/r is the default direction for missing values. Reals use the
// shortest decimal that round-trips the double. Lines starting with '#' are
// comments. Unknown header keys are skipped with a warning; anything else
// that does not match is an error.

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "brt/boosting.hpp"
#include "brt/error.hpp"
#include "brt/numfmt.hpp"

namespace brt {

inline constexpr std::string_view kModelVersion = "brtm/1";

inline void save_model(const BoostedModel& model, std::ostream& out) {
  const BoostConfig& c = model.config();
  for (const std::string& name : model.feature_names()) {
    if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos) {
      throw InvalidArgument("feature name '" + name + "' cannot be serialized");
    }
  }
  out << kModelVersion << '\n';
  out << "loss least_squares\n";
  out << "n_trees " << c.n_trees << '\n';
  out << "learn_rate " << format_double(c.learn_rate) << '\n';
  out << "max_nodes " << c.max_nodes << '\n';
  out << "min_leaf_obs " << c.min_leaf_obs << '\n';
  out << "subsample_fraction " << format_double(c.subsample_fraction) << '\n';
  out << "seed " << c.seed << '\n';
  out << "features";
  for (const std::string& name : model.feature_names()) out << ' ' << name;
  out << '\n';
  out << "f0 " << format_double(model.f0()) << '\n';
  out << "stages " << model.stages().size() << '\n';
  for (const Stage& s : model.stages()) {
    out << "stage " << format_double(s.gamma) << ' ' << s.tree.node_count();
    for (const TreeNode& n : s.tree.nodes()) {
      if (n.is_leaf()) {
        out << " L," << format_double(n.value) << ',' << n.n_obs;
      } else {
        out << " S," << n.split.feature << ',' << format_double(n.split.threshold) << ','
            << format_double(n.split.improvement) << ','
            << (n.split.default_direction == Direction::left ? 'l' : 'r') << ',' << n.left << ','
            << n.right << ',' << format_double(n.value) << ',' << n.n_obs;
      }
    }
    out << '\n';
  }
  out << "end\n";
}

inline void save_model_file(const BoostedModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  save_model(model, out);
  if (!out) throw Error("failed writing '" + path + "'");
}

namespace detail {

class ModelReader {
 public:
  ModelReader(std::istream& in, std::vector<std::string>* warnings)
      : in_(in), warnings_(warnings) {}

  BoostedModel read() {
    std::string line;
    if (!next(line)) fail("empty document");
    if (line.rfind("brtm/", 0) == 0) {
      if (line != kModelVersion) {
        throw ModelParseError("unsupported model version '" + line + "'");
      }
    } else {
      fail("expected version tag " + std::string(kModelVersion));
    }

    std::map<std::string, std::string> header;
    std::vector<std::string> features;
    bool have_features = false;
    std::optional<std::size_t> stage_count;
    while (!stage_count) {
      if (!next(line)) fail("truncated document before 'stages'");
      auto [key, rest] = split_key(line);
      if (key == "features") {
        features = tokens(rest);
        have_features = true;
      } else if (key == "stages") {
        stage_count = to_size(rest, "stages");
      } else if (key == "loss" || key == "n_trees" || key == "learn_rate" || key == "max_nodes" ||
                 key == "min_leaf_obs" || key == "subsample_fraction" || key == "seed" ||
                 key == "f0") {
        header[key] = std::string(trim(rest));
      } else if (warnings_) {
        warnings_->push_back("line " + std::to_string(line_no_) + ": ignoring unknown field '" +
                             key + "'");
      }
    }

    auto require = [&](const std::string& key) -> const std::string& {
      auto it = header.find(key);
      if (it == header.end()) fail("missing field '" + key + "'");
      return it->second;
    };
    if (!have_features) fail("missing field 'features'");
    if (require("loss") != "least_squares") fail("unknown loss '" + header["loss"] + "'");

    BoostConfig config;
    config.n_trees = to_size(require("n_trees"), "n_trees");
    config.learn_rate = to_real(require("learn_rate"), "learn_rate");
    config.max_nodes = to_size(require("max_nodes"), "max_nodes");
    config.min_leaf_obs = to_size(require("min_leaf_obs"), "min_leaf_obs");
    config.subsample_fraction = to_real(require("subsample_fraction"), "subsample_fraction");
    auto seed = parse_integer<std::uint64_t>(require("seed"));
    if (!seed) fail("field 'seed' is not an unsigned integer");
    config.seed = *seed;
    const double f0 = to_real(require("f0"), "f0");
    try {
      config.validate();
    } catch (const InvalidArgument& e) {
      fail(e.what());
    }

    std::vector<Stage> stages;
    stages.reserve(*stage_count);
    for (std::size_t m = 0; m < *stage_count; ++m) {
      if (!next(line)) fail("truncated document: expected " + std::to_string(*stage_count) +
                            " stages, found " + std::to_string(m));
      stages.push_back(parse_stage(line, features.size()));
    }
    if (!next(line) || trim(line) != "end") fail("expected 'end' after the last stage");

    try {
      return BoostedModel(f0, std::move(stages), config, std::move(features));
    } catch (const InvalidArgument& e) {
      fail(e.what());
    }
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ModelParseError("model parse error: line " + std::to_string(line_no_) + ": " + what);
  }

  // Next non-blank, non-comment line.
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      return true;
    }
    return false;
  }

  static std::pair<std::string, std::string_view> split_key(std::string_view line) {
    line = trim(line);
    const auto sp = line.find_first_of(" \t");
    if (sp == std::string_view::npos) return {std::string(line), {}};
    return {std::string(line.substr(0, sp)), line.substr(sp + 1)};
  }

  static std::vector<std::string> tokens(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream ss{std::string(s)};
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
  }

  static std::vector<std::string_view> split_commas(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
      const auto comma = s.find(',', start);
      out.push_back(s.substr(start, comma == std::string_view::npos ? comma : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  }

  std::size_t to_size(std::string_view s, const std::string& field) const {
    auto v = parse_integer<std::size_t>(s);
    if (!v) fail("field '" + field + "' is not a nonnegative integer");
    return *v;
  }

  double to_real(std::string_view s, const std::string& field) const {
    auto v = parse_double(s);
    if (!v) fail("field '" + field + "' is not a number");
    return *v;
  }

  std::int32_t to_child(std::string_view s, const std::string& field) const {
    auto v = parse_integer<std::int32_t>(s);
    if (!v) fail("field '" + field + "' is not an integer");
    return *v;
  }

  Stage parse_stage(const std::string& line, std::size_t n_features) const {
    const std::vector<std::string> tok = tokens(line);
    if (tok.size() < 3 || tok[0] != "stage") fail("expected a 'stage' record");
    Stage stage;
    stage.gamma = to_real(tok[1], "gamma");
    const std::size_t count = to_size(tok[2], "node_count");
    if (count == 0 || tok.size() != 3 + count) {
      fail("stage declares " + tok[2] + " nodes but lists " + std::to_string(tok.size() - 3));
    }
    std::vector<TreeNode> nodes(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto f = split_commas(tok[3 + i]);
      TreeNode& n = nodes[i];
      if (f[0] == "L" && f.size() == 3) {
        n.value = to_real(f[1], "leaf value");
        n.n_obs = to_size(f[2], "n_obs");
      } else if (f[0] == "S" && f.size() == 9) {
        n.split.feature = to_size(f[1], "feature");
        n.split.threshold = to_real(f[2], "threshold");
        n.split.improvement = to_real(f[3], "improvement");
        if (f[4] == "l") {
          n.split.default_direction = Direction::left;
        } else if (f[4] == "r") {
          n.split.default_direction = Direction::right;
        } else {
          fail("default direction must be 'l' or 'r'");
        }
        n.left = to_child(f[5], "left");
        n.right = to_child(f[6], "right");
        n.value = to_real(f[7], "node value");
        n.n_obs = to_size(f[8], "n_obs");
        if (n.left < 0) fail("split node without children");
      } else {
        fail("malformed node '" + tok[3 + i] + "'");
      }
    }
    try {
      stage.tree = RegressionTree(n_features, std::move(nodes));
    } catch (const InvalidArgument& e) {
      fail(e.what());
    }
    return stage;
  }

  std::istream& in_;
  std::vector<std::string>* warnings_;
  std::size_t line_no_ = 0;
};

}  // namespace detail

// Reads a document written by save_model. Nothing is returned on error.
inline BoostedModel load_model(std::istream& in, std::vector<std::string>* warnings = nullptr) {
  return detail::ModelReader(in, warnings).read();
}

inline BoostedModel load_model_file(const std::string& path,
                                    std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + path + "'");
  return load_model(in, warnings);
}

}  // namespace brt
