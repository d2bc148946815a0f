#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "layerlab/tasks.hpp"

namespace layerlab {

struct PromptSpec {
  std::string id;  // "<task>/<strategy>/<instance id>"
  TaskKind task = TaskKind::LayerAssignment;
  Strategy strategy;
  std::string graph_id;
  std::string text;
  std::uint64_t seed = 0;
  std::vector<std::string> icl_example_ids;
  TaskInstance instance;
};

struct PromptOptions {
  /// Character ceiling standing in for the model's token budget.
  std::size_t max_chars = 16000;
};

/// k distinct pool members other than `exclude`, in sampled order.
/// Throws InfeasibleError when fewer than k candidates remain.
std::vector<TaskInstance> sample_icl_examples(const std::vector<TaskInstance>& pool, int k,
                                              const std::string& exclude, std::uint64_t seed);

/// Pure in (instance, strategy, pool, seed). ICL examples are drawn from
/// `pool` members of the same task; their answers come from the oracle.
PromptSpec build_prompt(const TaskInstance& instance, const Strategy& strategy,
                        const std::vector<TaskInstance>& pool, std::uint64_t seed,
                        const PromptOptions& options = {});

/// Stable 64-bit mix of a seed and a string, used to derive per-spec seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::string_view salt);

}  // namespace layerlab
