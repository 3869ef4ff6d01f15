#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bgerbe/harness.hpp"

namespace bgerbe::harness {

struct CheckDef {
  std::string name;
  std::string identity;
  double tolerance;
  int stride = 1;  // evaluated on samples whose index is a multiple of stride
};

class SampleContext {
 public:
  SampleContext(const std::vector<CheckDef>& checks, int dim, std::uint64_t index, Rng rng)
      : checks_(checks), dim_(dim), index_(index), rng_(std::move(rng)) {}

  int dim() const noexcept { return dim_; }
  std::uint64_t index() const noexcept { return index_; }
  Rng& rng() noexcept { return rng_; }

  bool due(const std::string& check) const;
  void record(const std::string& check, double error);

  const std::vector<std::pair<std::size_t, double>>& observations() const noexcept { return obs_; }

 private:
  std::size_t find(const std::string& check) const;

  const std::vector<CheckDef>& checks_;
  int dim_;
  std::uint64_t index_;
  Rng rng_;
  std::vector<std::pair<std::size_t, double>> obs_;
};

struct SuiteDef {
  std::string name;
  std::vector<CheckDef> checks;
  std::function<void(SampleContext&)> run;
};

const std::vector<SuiteDef>& registry();

}  // namespace bgerbe::harness
