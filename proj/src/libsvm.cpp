#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

#include "sparsemax/dataset.hpp"
#include "sparsemax/errors.hpp"
#include "sparsemax/format.hpp"
#include "sparsemax/loss.hpp"

namespace smax {

namespace {

struct SparseRow {
  LabelSet labels;  // 0-based, ascending, unique
  std::vector<std::pair<std::size_t, double>> features;  // 0-based
};

template <typename T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                         out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' ||
                                 line[pos] == '\r')) {
      ++pos;
    }
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' &&
           line[end] != '\r') {
      ++end;
    }
    if (end > pos) tokens.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return tokens;
}

SparseRow parse_line(std::string_view line, std::size_t line_no,
                     const LibsvmOptions& opts) {
  SparseRow row;
  const auto tokens = split_whitespace(line);
  std::size_t first_feature = 0;
  if (!tokens.empty() && tokens[0].find(':') == std::string_view::npos) {
    first_feature = 1;
    std::string_view labels = tokens[0];
    std::size_t pos = 0;
    while (pos <= labels.size()) {
      const std::size_t comma = std::min(labels.find(',', pos), labels.size());
      const std::string_view item = labels.substr(pos, comma - pos);
      long long value = 0;
      if (!parse_number(item, value)) {
        throw ParseError(line_no, "bad label '" + std::string(item) + "'");
      }
      if (value < static_cast<long long>(opts.label_base)) {
        throw ParseError(line_no, "label " + std::string(item) +
                                      " below label base " +
                                      std::to_string(opts.label_base));
      }
      const auto label = static_cast<std::size_t>(value) - opts.label_base;
      if (opts.num_labels && label >= *opts.num_labels) {
        throw ParseError(line_no, "label " + std::string(item) +
                                      " exceeds K=" +
                                      std::to_string(*opts.num_labels));
      }
      row.labels.push_back(label);
      pos = comma + 1;
    }
    std::sort(row.labels.begin(), row.labels.end());
    row.labels.erase(std::unique(row.labels.begin(), row.labels.end()),
                     row.labels.end());
  }

  for (std::size_t t = first_feature; t < tokens.size(); ++t) {
    const std::string_view tok = tokens[t];
    const std::size_t colon = tok.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(line_no, "expected index:value, got '" +
                                    std::string(tok) + "'");
    }
    long long index = 0;
    double value = 0.0;
    if (!parse_number(tok.substr(0, colon), index) || index < 1) {
      throw ParseError(line_no, "bad feature index in '" + std::string(tok) +
                                    "'");
    }
    if (!parse_number(tok.substr(colon + 1), value) || !std::isfinite(value)) {
      throw ParseError(line_no, "bad feature value in '" + std::string(tok) +
                                    "'");
    }
    const auto feature = static_cast<std::size_t>(index - 1);
    if (opts.num_features && feature >= *opts.num_features) {
      throw ParseError(line_no, "feature index " + std::to_string(index) +
                                    " exceeds D=" +
                                    std::to_string(*opts.num_features));
    }
    row.features.emplace_back(feature, value);
  }
  return row;
}

}  // namespace

LibsvmReadResult read_libsvm_multilabel(std::istream& in,
                                        const LibsvmOptions& opts) {
  std::vector<SparseRow> rows;
  std::size_t dropped = 0;
  std::size_t max_label = 0;
  std::size_t max_feature = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (split_whitespace(line).empty()) continue;
    SparseRow row = parse_line(line, line_no, opts);
    if (row.labels.empty()) {
      ++dropped;
      continue;
    }
    max_label = std::max(max_label, row.labels.back() + 1);
    for (const auto& [f, v] : row.features) {
      max_feature = std::max(max_feature, f + 1);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw EmptyDatasetError("no labeled examples in LIBSVM input (" +
                            std::to_string(dropped) + " unlabeled dropped)");
  }

  const std::size_t num_labels = opts.num_labels.value_or(max_label);
  const std::size_t num_features = opts.num_features.value_or(max_feature);
  LibsvmReadResult result{LabeledDataset(num_features, num_labels), dropped};
  Vector x(num_features);
  for (const SparseRow& row : rows) {
    std::fill(x.begin(), x.end(), 0.0);
    for (const auto& [f, v] : row.features) x[f] += v;
    const TargetDistribution q =
        TargetDistribution::uniform_over(row.labels, num_labels);
    result.data.add(x, q.values());
  }
  return result;
}

LibsvmReadResult read_libsvm_multilabel(const std::filesystem::path& path,
                                        const LibsvmOptions& opts) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return read_libsvm_multilabel(in, opts);
}

void write_libsvm_multilabel(std::ostream& out, const LabeledDataset& data,
                             std::size_t label_base) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const LabelSet labels = data.labels(i);
    for (std::size_t r = 0; r < labels.size(); ++r) {
      if (r > 0) out << ',';
      out << labels[r] + label_base;
    }
    const auto x = data.features(i);
    for (std::size_t d = 0; d < x.size(); ++d) {
      if (x[d] != 0.0) out << ' ' << d + 1 << ':' << format_double(x[d]);
    }
    out << '\n';
  }
}

void write_libsvm_multilabel(const std::filesystem::path& path,
                             const LabeledDataset& data,
                             std::size_t label_base) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_libsvm_multilabel(out, data, label_base);
}

}  // namespace smax
