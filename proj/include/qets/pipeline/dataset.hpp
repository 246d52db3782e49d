// Copyright 2026 The qets Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace qets::pipeline {

struct Sample {
    std::string id;
    int label = 0;
    std::vector<double> embedding;
};

/// Precomputed sentence embeddings with binary labels. All vectors share one
/// dimension.
class EmbeddingDataset {
  public:
    explicit EmbeddingDataset(std::size_t dimension) : dimension_(dimension) {}

    /// Validates label and dimension.
    void add(Sample sample);

    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] bool empty() const noexcept { return samples_.empty(); }
    [[nodiscard]] const std::vector<Sample> &samples() const noexcept { return samples_; }
    [[nodiscard]] const Sample &operator[](std::size_t i) const { return samples_[i]; }
    [[nodiscard]] std::size_t count_label(int label) const noexcept;

  private:
    std::size_t dimension_;
    std::vector<Sample> samples_;
};

/// Format: header `dim <d>`, then `id,label,v1,...,vd` per line. Lines
/// starting with '#' are ignored.
[[nodiscard]] EmbeddingDataset read_embeddings(std::istream &in);
void write_embeddings(std::ostream &out, const EmbeddingDataset &dataset);

struct SplitSpec {
    std::size_t per_label_train = 256;
    std::uint64_t seed = 0;
};

struct DatasetSplit {
    EmbeddingDataset train;
    EmbeddingDataset test;
};

/// Balanced split: exactly `per_label_train` samples of each label go to
/// train, the rest to test. Samples are ordered by id before the seeded draw,
/// so the split does not depend on input order. Both halves come out sorted
/// by id.
[[nodiscard]] DatasetSplit split_dataset(const EmbeddingDataset &dataset, const SplitSpec &spec);

/// Two Gaussian clusters at +/- `separation` along a fixed random direction,
/// label 0 on the positive side. Linearly separable for separation well
/// above `noise`.
[[nodiscard]] EmbeddingDataset synthetic_clusters(std::size_t per_label, std::size_t dimension,
                                                  double separation, double noise,
                                                  std::uint64_t seed);

} // namespace qets::pipeline
