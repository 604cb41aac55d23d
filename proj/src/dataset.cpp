#include "ndc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ndc/rng.hpp"

namespace ndc {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& tok, std::size_t line_no, const char* what) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": bad " + what + " '" +
                             tok + "'");
  }
  return v;
}

// shortest representation that parses back to the same double
void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  out.append(buf, ptr);
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == delim) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

Dataset::Builder::Builder(std::size_t dim) : dim_(dim) {}

Dataset::Builder& Dataset::Builder::add(std::span<const double> features, int label,
                                        double weight) {
  if (features.size() != dim_) {
    throw std::invalid_argument("point has " + std::to_string(features.size()) +
                                " features, expected " + std::to_string(dim_));
  }
  if (label != 1 && label != -1) {
    throw std::invalid_argument("label must be +1 or -1, got " + std::to_string(label));
  }
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("point weight must be positive and finite");
  }
  features_.insert(features_.end(), features.begin(), features.end());
  labels_.push_back(static_cast<std::int8_t>(label));
  weights_.push_back(weight);
  return *this;
}

Dataset Dataset::Builder::build() && {
  if (labels_.empty()) throw std::runtime_error("empty dataset");
  Dataset d;
  d.dim_ = dim_;
  d.features_ = std::move(features_);
  d.labels_ = std::move(labels_);
  d.weights_ = std::move(weights_);
  d.positives_.clear();
  d.negatives_.clear();
  for (std::size_t i = 0; i < d.labels_.size(); ++i) {
    (d.labels_[i] > 0 ? d.positives_ : d.negatives_).push_back(i);
  }
  return d;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Builder b(dim_);
  for (std::size_t i : indices) {
    if (i >= size()) throw std::out_of_range("subset index out of range");
    b.add(features(i), label(i), weight(i));
  }
  return std::move(b).build();
}

Dataset load_csv(std::istream& in, const CsvOptions& opt) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t label_idx = 0;
  bool label_resolved = false;
  std::vector<std::string> header;

  if (opt.has_header) {
    if (!std::getline(in, line)) throw std::runtime_error("empty dataset");
    ++line_no;
    header = split(line, opt.delimiter);
    auto it = std::find(header.begin(), header.end(), opt.label_column);
    if (it != header.end()) {
      label_idx = static_cast<std::size_t>(it - header.begin());
      label_resolved = true;
    }
  }
  if (!label_resolved) {
    // fall back to a numeric column index
    std::size_t v = 0;
    const char* first = opt.label_column.data();
    const char* last = first + opt.label_column.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
      throw std::runtime_error("unknown label column '" + opt.label_column + "'");
    }
    label_idx = v;
    label_resolved = true;
  }

  std::optional<Dataset::Builder> builder;
  std::vector<double> row;
  std::size_t n_cols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split(line, opt.delimiter);
    if (!builder) {
      n_cols = cells.size();
      if (label_idx >= n_cols) {
        throw std::runtime_error("label column index " + std::to_string(label_idx) +
                                 " out of range for " + std::to_string(n_cols) + " columns");
      }
      builder.emplace(n_cols - 1);
    } else if (cells.size() != n_cols) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(n_cols) + " cells, got " +
                               std::to_string(cells.size()));
    }
    row.clear();
    int label = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_idx) {
        label = (cells[c] == opt.positive_value) ? +1 : -1;
      } else {
        row.push_back(parse_double(cells[c], line_no, "feature value"));
      }
    }
    builder->add(row, label);
  }
  if (!builder) throw std::runtime_error("empty dataset");
  return std::move(*builder).build();
}

Dataset load_csv_file(const std::string& path, const CsvOptions& opt) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return load_csv(in, opt);
}

void save_csv(const Dataset& data, std::ostream& out) {
  std::string buf;
  for (std::size_t c = 0; c < data.dim(); ++c) {
    buf += "f";
    buf += std::to_string(c);
    buf += ",";
  }
  buf += "label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.features(i)) {
      append_double(buf, v);
      buf += ",";
    }
    buf += (data.label(i) > 0) ? "1" : "-1";
    buf += "\n";
    if (buf.size() > (1u << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

Dataset load_sparse_text(std::istream& in) {
  struct Entry {
    std::size_t index;  // 1-based
    double value;
  };
  std::vector<std::vector<Entry>> rows;
  std::vector<int> labels;
  std::size_t max_index = 0;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    std::istringstream toks(t);
    std::string tok;
    toks >> tok;
    if (tok.size() > 1 && tok[0] == '+') tok.erase(0, 1);  // from_chars rejects '+1'
    double lab = parse_double(tok, line_no, "label");
    if (lab != 1.0 && lab != -1.0) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": label must be +1 or -1");
    }
    std::vector<Entry> entries;
    std::size_t prev = 0;
    while (toks >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": expected index:value, got '" + tok + "'");
      }
      std::size_t idx = static_cast<std::size_t>(
          parse_double(tok.substr(0, colon), line_no, "feature index"));
      double val = parse_double(tok.substr(colon + 1), line_no, "feature value");
      if (idx == 0 || idx <= prev) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": feature indices must be 1-based and strictly increasing");
      }
      prev = idx;
      max_index = std::max(max_index, idx);
      entries.push_back({idx, val});
    }
    rows.push_back(std::move(entries));
    labels.push_back(lab > 0 ? +1 : -1);
  }
  if (rows.empty()) throw std::runtime_error("empty dataset");

  Dataset::Builder b(max_index);
  std::vector<double> dense(max_index);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::fill(dense.begin(), dense.end(), 0.0);
    for (const auto& e : rows[i]) dense[e.index - 1] = e.value;
    b.add(dense, labels[i]);
  }
  return std::move(b).build();
}

Dataset load_sparse_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return load_sparse_text(in);
}

void save_sparse_text(const Dataset& data, std::ostream& out) {
  std::string buf;
  for (std::size_t i = 0; i < data.size(); ++i) {
    buf += (data.label(i) > 0) ? "+1" : "-1";
    auto x = data.features(i);
    for (std::size_t c = 0; c < x.size(); ++c) {
      if (x[c] == 0.0) continue;
      buf += " ";
      buf += std::to_string(c + 1);
      buf += ":";
      append_double(buf, x[c]);
    }
    buf += "\n";
    if (buf.size() > (1u << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

Dataset stratified_subsample(const Dataset& data, std::size_t target_n, std::uint64_t seed) {
  if (target_n == 0) throw std::invalid_argument("target size must be positive");
  if (target_n > data.size()) {
    throw std::invalid_argument("target size " + std::to_string(target_n) +
                                " exceeds dataset size " + std::to_string(data.size()));
  }
  const double share =
      static_cast<double>(target_n) * static_cast<double>(data.num_positive()) /
      static_cast<double>(data.size());
  const std::size_t pos_quota = static_cast<std::size_t>(std::floor(share + 0.5));
  const std::size_t neg_quota = target_n - pos_quota;
  if (pos_quota > data.num_positive() || neg_quota > data.num_negative()) {
    throw std::runtime_error("stratum too small for its quota");
  }
  if ((pos_quota > 0 && data.num_positive() == 0) ||
      (neg_quota > 0 && data.num_negative() == 0)) {
    throw std::runtime_error("empty stratum with positive quota");
  }

  Rng rng(seed);
  auto take = [&rng](const std::vector<std::size_t>& stratum, std::size_t k) {
    // partial Fisher-Yates: the first k entries become the sample
    std::vector<std::size_t> pool = stratum;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  };

  std::vector<std::size_t> chosen = take(data.positives(), pos_quota);
  std::vector<std::size_t> neg = take(data.negatives(), neg_quota);
  chosen.insert(chosen.end(), neg.begin(), neg.end());
  std::sort(chosen.begin(), chosen.end());
  return data.subset(chosen);
}

}  // namespace ndc
