#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ndc {

struct LabeledPoint {
  std::vector<double> features;
  int label = +1;  // +1 or -1
  double weight = 1.0;
};

// A subset of rows with multiplicity weights. Empty indices means "all rows";
// empty weights means "use the dataset's own weights".
struct WeightedView {
  std::span<const std::size_t> indices = {};
  std::span<const double> weights = {};
};

// Binary-labeled points, stored as one flat row-major feature block so the
// hot loops stream through memory.
class Dataset {
 public:
  Dataset() = default;  // empty; fill through the Builder

  class Builder {
   public:
    explicit Builder(std::size_t dim);
    Builder& add(std::span<const double> features, int label, double weight = 1.0);
    Dataset build() &&;

   private:
    std::size_t dim_;
    std::vector<double> features_;
    std::vector<std::int8_t> labels_;
    std::vector<double> weights_;
  };

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return dim_; }

  std::span<const double> features(std::size_t i) const {
    return {features_.data() + i * dim_, dim_};
  }
  std::span<const double> feature_matrix() const { return features_; }
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const std::int8_t> labels() const { return labels_; }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }

  const std::vector<std::size_t>& positives() const { return positives_; }
  const std::vector<std::size_t>& negatives() const { return negatives_; }
  std::size_t num_positive() const { return positives_.size(); }
  std::size_t num_negative() const { return negatives_.size(); }

  Dataset subset(std::span<const std::size_t> indices) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> features_;  // size() * dim(), row-major
  std::vector<std::int8_t> labels_;
  std::vector<double> weights_;
  std::vector<std::size_t> positives_;
  std::vector<std::size_t> negatives_;
};

struct CsvOptions {
  std::string label_column = "label";  // header name, or numeric column index
  std::string positive_value = "1";
  bool has_header = true;
  char delimiter = ',';
};

Dataset load_csv(std::istream& in, const CsvOptions& opt = {});
Dataset load_csv_file(const std::string& path, const CsvOptions& opt = {});
void save_csv(const Dataset& data, std::ostream& out);

// One point per line: "label idx:value idx:value ..." with 1-based, strictly
// increasing indices; absent coordinates are zero.
Dataset load_sparse_text(std::istream& in);
Dataset load_sparse_text_file(const std::string& path);
void save_sparse_text(const Dataset& data, std::ostream& out);

// Class-proportional subsample without replacement. The positive quota is
// round-half-up of target_n * Y+ / n; the rest comes from the negatives.
Dataset stratified_subsample(const Dataset& data, std::size_t target_n, std::uint64_t seed);

}  // namespace ndc
