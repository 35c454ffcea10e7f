#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "moat/growth.hpp"
#include "moat/oracles.hpp"
#include "moat/random.hpp"

namespace moatlab {

using Json = nlohmann::ordered_json;

struct Assertion {
  int criterion = 0;
  std::string name;
  bool pass = false;
  Json detail;
};

struct Report {
  std::string experiment;
  Json params = Json::object();
  Json data = Json::object();
  std::vector<Assertion> assertions;

  bool check(int criterion, std::string name, bool pass, Json detail = nullptr);
  bool pass() const;
  // True if every assertion tagged with the criterion passes; false if there are none.
  bool pass(int criterion) const;
  std::size_t count(int criterion) const;
  std::string to_json() const;
};

struct ExperimentOptions {
  std::uint64_t seed = 1;
  std::optional<int> n;
  std::optional<int> terminals;
  std::optional<moat::Rational> eps;
  moat::OracleCaps caps;
  // Called after each instance or plan with a short label. Reports never
  // contain timings, so callers time items through this hook.
  std::function<void(const std::string&)> progress;
};

Report mst_optimal_712(const ExperimentOptions& opt);
Report gap_1898(const ExperimentOptions& opt);
Report lower_bound_712(const ExperimentOptions& opt);
Report gadget_lemmas(const ExperimentOptions& opt);
Report oracle_chain(const ExperimentOptions& opt);
Report subdivision_invariance(const ExperimentOptions& opt);

const std::vector<std::string>& experiment_names();
// Throws moat::InvalidInput for an unknown name.
Report run_experiment(std::string_view name, const ExperimentOptions& opt);

struct SafetyStats {
  std::size_t edges = 0;
  std::size_t flagged = 0;
  std::size_t paths = 0;          // sampled S-tight paths
  std::size_t proper = 0;         // with a proper meeting point and S-safe suffix
  std::size_t unsafe_paths = 0;   // skipped: not S-safe
  std::size_t lemma_failures = 0; // atf(S, m) = atf(R, m) < atf(S, v) violated
  std::size_t bound_failures = 0; // length(P[m..v]) > 2 atf_S(v) + atf_R(v) - 3 atf_S(m)
  bool ok() const { return flagged == 0 && lemma_failures == 0 && bound_failures == 0; }
  Json to_json() const;
};
// Samples up to per_set target vertices for every set other than the top.
SafetyStats check_safety(const moat::GrowthTrace& trace, moat::Rng& rng, int per_set);

moat::Instance order_sensitive_instance();
moat::MergePlan order_sensitive_plan();

}  // namespace moatlab
