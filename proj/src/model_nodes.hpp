#pragma once

// Internal evaluator tree behind ModelManifold.

#include <optional>
#include <random>
#include <span>
#include <vector>

#include "kverify/jet.hpp"
#include "kverify/model.hpp"

namespace kverify::detail {

class MetricNode {
 public:
  virtual ~MetricNode() = default;

  virtual int dimension() const = 0;
  virtual JetMatrix metric(std::span<const Jet> x) const = 0;
  virtual bool has_complex_structure() const = 0;
  virtual JetMatrix complex_structure(std::span<const Jet> x) const;
  virtual bool contains(int chart, std::span<const double> x) const = 0;
  virtual void sample(std::mt19937_64& rng, std::span<double> out) const = 0;
  virtual int chart_count() const { return 1; }
  // Chart transition evaluated on jets; empty when unsupported.
  virtual std::optional<std::vector<Jet>> transition(int from, int to, std::span<const Jet> x) const;

  const ModelMetadata& metadata() const { return metadata_; }

 protected:
  ModelMetadata metadata_;
};

}  // namespace kverify::detail
