#pragma once

// File formats: point CSVs, constraint files, synthetic instances and the
// result JSON.

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "breach/breach.hpp"
#include "breach/core.hpp"
#include "breach/random.hpp"

namespace breach::io {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LabelledDataset {
  Dataset dataset;
  // color_labels[c] is the text of dense color id c, in first-appearance order.
  std::vector<std::string> color_labels;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  out.push_back(std::move(field));
  return out;
}

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

// Reads a headed CSV. `feature_columns` empty means every column other than
// the color column. Colors get dense ids in order of first appearance.
inline LabelledDataset load_csv(std::istream& in, const std::string& color_column,
                                std::vector<std::string> feature_columns = {}) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line).empty())
    throw InputError("empty file: missing header row");
  std::vector<std::string> header = detail::split_csv_line(line);
  for (auto& h : header) h = detail::trim(h);

  auto column_of = [&header](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw InputError("missing column '" + name + "'");
  };
  const std::size_t color_col = column_of(color_column);
  std::vector<std::size_t> feature_cols;
  if (feature_columns.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (i != color_col) feature_cols.push_back(i);
  } else {
    for (const auto& name : feature_columns) feature_cols.push_back(column_of(name));
  }
  if (feature_cols.empty()) throw InputError("no feature columns");

  std::vector<std::vector<double>> points;
  std::vector<Color> colors;
  std::vector<std::string> labels;
  std::unordered_map<std::string, Color> ids;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size())
      throw InputError("row " + std::to_string(row) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    std::vector<double> p;
    p.reserve(feature_cols.size());
    for (std::size_t c : feature_cols) {
      auto v = detail::parse_double(fields[c]);
      if (!v)
        throw InputError("row " + std::to_string(row) + ", column '" + header[c] +
                         "': non-numeric value '" + fields[c] + "'");
      p.push_back(*v);
    }
    std::string label = detail::trim(fields[color_col]);
    auto [it, inserted] = ids.try_emplace(label, static_cast<Color>(labels.size()));
    if (inserted) labels.push_back(label);
    colors.push_back(it->second);
    points.push_back(std::move(p));
  }
  if (points.empty()) throw InputError("empty file: no data rows");
  std::size_t m = labels.size();
  return {Dataset(std::move(points), std::move(colors), m), std::move(labels)};
}

inline LabelledDataset load_csv(const std::string& path, const std::string& color_column,
                                std::vector<std::string> feature_columns = {}) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return load_csv(in, color_column, std::move(feature_columns));
}

// Header "x,y,color" for 2-D data, "x0,...,x{d-1},color" otherwise.
// Coordinates are written with 17 significant digits, so load_csv reads back
// the same doubles.
inline void write_csv(std::ostream& out, const Dataset& ds,
                      const std::vector<std::string>& color_labels = {}) {
  const std::size_t d = ds.dim();
  if (d == 2) {
    out << "x,y,color\n";
  } else {
    for (std::size_t j = 0; j < d; ++j) out << 'x' << j << ',';
    out << "color\n";
  }
  for (Index i = 0; i < ds.size(); ++i) {
    for (double x : ds.point(i)) out << detail::format_double(x) << ',';
    Color c = ds.color(i);
    if (c < color_labels.size())
      out << color_labels[c];
    else
      out << c;
    out << '\n';
  }
}

struct SyntheticParams {
  std::size_t n = 1000;
  std::size_t num_colors = 3;
  std::size_t num_clouds = 10;
  double box = 10.0;
  std::uint64_t seed = 0;
};

// Isotropic unit-variance 2-D Gaussian clouds with centers uniform in
// [-box, box]^2; each point picks a cloud and a color uniformly at random.
inline Dataset gen_synthetic(const SyntheticParams& params) {
  if (params.num_colors == 0) throw InvalidInput("need at least one color");
  if (params.n < params.num_colors) throw InvalidInput("need n >= m");
  if (params.num_clouds == 0) throw InvalidInput("need at least one cloud");
  Rng rng(params.seed);
  std::vector<std::array<double, 2>> centers(params.num_clouds);
  for (auto& c : centers) {
    c[0] = rng.uniform(-params.box, params.box);
    c[1] = rng.uniform(-params.box, params.box);
  }
  std::vector<std::vector<double>> points;
  std::vector<Color> colors;
  points.reserve(params.n);
  colors.reserve(params.n);
  for (std::size_t i = 0; i < params.n; ++i) {
    const auto& c = centers[rng.below(params.num_clouds)];
    double x = c[0] + rng.normal();
    double y = c[1] + rng.normal();
    points.push_back({x, y});
    colors.push_back(static_cast<Color>(rng.below(params.num_colors)));
  }
  return Dataset(std::move(points), std::move(colors), params.num_colors);
}

inline std::vector<std::string> numeric_labels(std::size_t m) {
  std::vector<std::string> labels;
  for (std::size_t c = 0; c < m; ++c) labels.push_back(std::to_string(c));
  return labels;
}

// Lines "color_id,lower,upper"; color_id is matched against the color labels.
// Blank lines and lines starting with '#' are skipped. Every color needs a line.
inline FairnessSpec load_constraints(std::istream& in, std::size_t k,
                                     const std::vector<std::string>& color_labels) {
  const std::size_t m = color_labels.size();
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> bounds(m);
  std::string line;
  std::size_t lineno = 0;
  auto parse_count = [&](const std::string& text, const char* what) {
    std::string t = detail::trim(text);
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (t.empty() || used != t.size() || v < 0)
      throw InputError("constraint line " + std::to_string(lineno) + ": invalid " +
                       what + " '" + t + "'");
    return static_cast<std::size_t>(v);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (!t.empty() && t.back() == '\r') t.pop_back();
    if (t.empty() || t.front() == '#') continue;
    auto fields = detail::split_csv_line(t);
    if (fields.size() != 3)
      throw InputError("constraint line " + std::to_string(lineno) +
                       ": expected color_id,lower,upper");
    std::string label = detail::trim(fields[0]);
    std::size_t c = m;
    for (std::size_t i = 0; i < m; ++i)
      if (color_labels[i] == label) c = i;
    if (c == m)
      throw InputError("constraint line " + std::to_string(lineno) +
                       ": unknown color '" + label + "'");
    if (bounds[c])
      throw InputError("constraint line " + std::to_string(lineno) +
                       ": duplicate color '" + label + "'");
    bounds[c] = std::pair{parse_count(fields[1], "lower"), parse_count(fields[2], "upper")};
  }
  std::vector<std::size_t> lower(m), upper(m);
  for (std::size_t c = 0; c < m; ++c) {
    if (!bounds[c])
      throw InputError("constraint file has no line for color '" + color_labels[c] + "'");
    lower[c] = bounds[c]->first;
    upper[c] = bounds[c]->second;
  }
  return FairnessSpec(k, std::move(lower), std::move(upper));
}

inline FairnessSpec load_constraints(const std::string& path, std::size_t k,
                                     const std::vector<std::string>& color_labels) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return load_constraints(in, k, color_labels);
}

inline nlohmann::ordered_json score_json(double score) {
  if (std::isinf(score)) return "inf";
  return score;
}

struct ResultOptions {
  bool include_timings = true;
};

// Result document:
// {solution, counts, score, feasible, [reason], provenance, timings_ms, config}
// `config` is echoed verbatim. With include_timings off every timing is 0, so
// runs with equal inputs produce identical bytes.
inline nlohmann::ordered_json result_json(const Solution& s, const LabelledDataset& data,
                                          const nlohmann::ordered_json& config,
                                          const ResultOptions& options = {}) {
  nlohmann::ordered_json j;
  j["solution"] = s.indices;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  auto hist = color_histogram(data.dataset, s.indices, data.dataset.num_colors());
  for (std::size_t c = 0; c < hist.size(); ++c) {
    std::string key = c < data.color_labels.size() ? data.color_labels[c] : std::to_string(c);
    counts[key] = hist[c];
  }
  j["counts"] = counts;
  j["score"] = s.feasible ? score_json(s.score) : nlohmann::ordered_json(nullptr);
  j["feasible"] = s.feasible;
  if (!s.feasible) j["reason"] = s.reason;
  j["provenance"] = {{"tau_index", s.provenance.tau_index},
                     {"gamma2_index", s.provenance.gamma2_index},
                     {"repetition", s.provenance.repetition},
                     {"seed", s.provenance.seed},
                     {"tau", s.provenance.tau},
                     {"gamma1", s.provenance.gamma1},
                     {"gamma2", s.provenance.gamma2},
                     {"certificate", s.provenance.certificate}};
  const bool t = options.include_timings;
  j["timings_ms"] = {{"prune", t ? s.timings.prune_ms : 0.0},
                     {"search", t ? s.timings.search_ms : 0.0},
                     {"total", t ? s.timings.total_ms : 0.0}};
  j["config"] = config;
  return j;
}

inline nlohmann::ordered_json config_json(const BreachConfig& c) {
  return {{"variant", to_string(c.variant)},
          {"epsilon", c.epsilon},
          {"T", c.T},
          {"dec_repeats", c.dec_repeats},
          {"repeat_policy", c.repeat_policy == RepeatPolicy::Theory ? "theory" : "practical"},
          {"gamma2_sweep", c.gamma2_sweep},
          {"prune_mode", c.prune_mode == PruneMode::FurthestPoint ? "furthest" : "arbitrary"},
          {"seed", c.master_seed}};
}

}  // namespace breach::io
