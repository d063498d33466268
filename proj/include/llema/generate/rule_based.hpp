#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "llema/chem/rules.hpp"
#include "llema/generate/request.hpp"
#include "llema/random.hpp"

namespace llema::generate {

// Mutates demonstration parents with the concrete chemistry rules. Parents
// come from the success pool with probability 0.8 when both pools offer one;
// with no usable demonstrations the cold-start seeds are used instead.
class RuleBasedGenerator final : public Generator {
 public:
  explicit RuleBasedGenerator(std::uint64_t seed, std::vector<crystal::Structure> seeds = {},
                              std::vector<chem::RuleId> rules = chem::concrete_rules(),
                              double success_bias = 0.8)
      : rng_(seed), seeds_(std::move(seeds)), rules_(std::move(rules)), bias_(success_bias) {
    for (const auto r : rules_)
      if (!chem::is_concrete(r))
        throw Error(Errc::PromptOnlyRule, std::string(chem::rule_info(r).name));
    if (rules_.empty()) throw Error(Errc::InvalidConfig, "rule-based generator needs rules");
  }

  std::string tag() const override { return "rules"; }

  GenerationOutcome generate(const GenerationRequest& req) override {
    std::vector<const crystal::Structure*> good, bad;
    for (const auto& d : req.demonstrations) {
      if (!d.structure) continue;
      (d.pool == Pool::success ? good : bad).push_back(&*d.structure);
    }
    if (good.empty() && bad.empty())
      for (const auto& s : seeds_) good.push_back(&s);

    GenerationOutcome out;
    std::set<std::string> emitted;
    const long long cap = 20LL * req.batch;
    for (long long attempt = 0;
         attempt < cap && static_cast<int>(out.candidates.size()) < req.batch; ++attempt) {
      if (good.empty() && bad.empty()) break;
      const bool from_good = !good.empty() && (bad.empty() || bernoulli(rng_, bias_));
      const auto& parents = from_good ? good : bad;
      const auto& parent = *parents[uniform_index(rng_, parents.size())];
      const auto rule = rules_[uniform_index(rng_, rules_.size())];
      std::vector<crystal::Structure> children;
      try {
        children = chem::apply_rule(rule, parent, rng_);
      } catch (const Error& e) {
        if (e.code() != Errc::NoValidSubstitute) throw;
        continue;
      }
      for (auto& child : children)
        if (emitted.insert(child.reduced_formula()).second)
          out.candidates.push_back(std::move(child));
    }
    if (out.candidates.empty())
      throw Error(Errc::ExhaustedAttempts,
                  "no candidate after " + std::to_string(cap) + " rule applications");
    return out;
  }

 private:
  Rng rng_;
  std::vector<crystal::Structure> seeds_;
  std::vector<chem::RuleId> rules_;
  double bias_;
};

}  // namespace llema::generate
