/* Copyright 2026 The cvsynth Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cvsynth/linalg.hpp"

namespace cvsynth {

struct NnHit {
    double distance = 0.0;
    std::uint32_t owner_id = 0;
};

struct QueryStats {
    std::size_t nodes_visited = 0;
    std::size_t points_checked = 0;
};

/// Squared Euclidean distance with a fixed left-to-right summation order.
/// Every index and the linear-scan oracle go through this function.
double squared_distance(const double* a, const double* b, int dim);

/// Point records laid out as (dim coordinates, owner id) with the owner held
/// as a double, so a buffer moves into an index without copying.
struct PointBuffer {
    int dim = 0;
    std::vector<double> rec;

    explicit PointBuffer(int d = 0) : dim(d) {}
    int stride() const { return dim + 1; }
    std::size_t size() const { return dim > 0 ? rec.size() / static_cast<std::size_t>(stride()) : 0; }
    const double* coords(std::size_t i) const { return rec.data() + i * static_cast<std::size_t>(stride()); }
    std::uint32_t owner(std::size_t i) const {
        return static_cast<std::uint32_t>(rec[i * static_cast<std::size_t>(stride()) + static_cast<std::size_t>(dim)]);
    }
    void reserve(std::size_t n) { rec.reserve(n * static_cast<std::size_t>(stride())); }
    void push(const double* x, std::uint32_t owner);
    void push(const EmbedPoint& p);
};

/// Interface any exact or approximate backend could implement.
class NearestNeighborIndex {
  public:
    virtual ~NearestNeighborIndex() = default;
    virtual int dim() const = 0;
    virtual std::size_t size() const = 0;
    /// Exact nearest point; ties go to the smaller owner id.
    virtual NnHit nearest(const double* q, QueryStats* stats = nullptr) const = 0;
    /// The nearest() answer when its distance is strictly below radius,
    /// otherwise nothing.
    virtual std::optional<NnHit> nearest_within(const double* q, double radius,
                                                QueryStats* stats = nullptr) const = 0;
};

/// Balanced kd-tree: median split, splitting coordinate cycles with depth.
/// Immutable after build; queries are safe from any number of threads.
class NnIndex final : public NearestNeighborIndex {
  public:
    NnIndex() = default;
    /// Deterministic in the input order. Throws on empty input, a
    /// coordinate-count mismatch or dim > 256.
    static NnIndex build(PointBuffer points);
    static NnIndex build(const std::vector<EmbedPoint>& points);

    int dim() const override { return dim_; }
    std::size_t size() const override { return n_; }
    NnHit nearest(const double* q, QueryStats* stats = nullptr) const override;
    std::optional<NnHit> nearest_within(const double* q, double radius,
                                        QueryStats* stats = nullptr) const override;
    NnHit nearest(const std::vector<double>& q, QueryStats* stats = nullptr) const;

    std::size_t memory_bytes() const;
    /// Bytes per stored point, used for memory estimates before a build.
    static std::size_t bytes_per_point(int dim);

  private:
    struct Search;
    template <int D>
    void search(Search& s, std::size_t node, std::size_t lo, std::size_t hi, int depth, double rd) const;
    void run(Search& s) const;

    int dim_ = 0;
    std::size_t n_ = 0;
    // PointBuffer records reordered into tree order.
    std::vector<double> rec_;
    // Heap-numbered split values; leaves hold at most kLeaf points.
    std::vector<double> split_;
};

/// Brute-force reference with the same tie rule.
class LinearScanIndex final : public NearestNeighborIndex {
  public:
    explicit LinearScanIndex(PointBuffer points);

    int dim() const override { return points_.dim; }
    std::size_t size() const override { return points_.size(); }
    NnHit nearest(const double* q, QueryStats* stats = nullptr) const override;
    std::optional<NnHit> nearest_within(const double* q, double radius,
                                        QueryStats* stats = nullptr) const override;

  private:
    PointBuffer points_;
};

}  // namespace cvsynth
