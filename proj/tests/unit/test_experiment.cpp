#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "fixtures.hpp"
#include "layerlab/errors.hpp"

using namespace layerlab;
using namespace fixtures;
namespace fs = std::filesystem;

namespace {

std::vector<PromptSpec> mixed_specs(std::size_t graphs) {
  std::vector<Graph> gs;
  std::vector<TaskInstance> la, el;
  for (std::size_t i = 0; i < graphs; ++i) {
    const std::string id = "g" + std::to_string(i);
    gs.push_back(generate_random_graph(10, 13, {.connected = true}, i));
    la.push_back(make_layer_assignment(id, gs.back(), 0));
    el.push_back(make_edge_length(id, gs.back(), 0, EdgeLayering::Random, 6, i));
  }
  std::vector<PromptSpec> out;
  for (std::size_t i = 0; i < graphs; ++i) {
    out.push_back(build_prompt(la[i], Strategy::standard(), la, 1));
    out.push_back(build_prompt(el[i], Strategy::icl(3), el, 1));
    out.push_back(build_prompt(make_sort_layers(la[i].id, gs[i], 0), Strategy::steps(), {}, 1));
  }
  return out;
}

/// Answers out of order: later specs return first.
class SlowFirst : public ChatBackend {
 public:
  explicit SlowFirst(const std::vector<PromptSpec>& specs) : oracle_(specs) {
    for (std::size_t i = 0; i < specs.size(); ++i) rank_[specs[i].id] = i;
  }
  ChatResponse complete(const ChatRequest& r) override {
    std::this_thread::sleep_for(std::chrono::milliseconds(2 * (rank_.size() - rank_.at(r.tag))));
    return oracle_.complete(r);
  }
  std::string name() const override { return "slow"; }

 private:
  OracleResponder oracle_;
  std::map<std::string, std::size_t> rank_;
};

class Failing : public ChatBackend {
 public:
  ChatResponse complete(const ChatRequest& r) override {
    if (r.tag.find("edge-length") != std::string::npos) throw TransportError("down", 3, 503);
    if (r.tag.find("sort-layers") != std::string::npos) throw std::runtime_error("boom");
    ChatResponse out;
    out.content = "0 - 0";
    return out;
  }
  std::string name() const override { return "failing"; }
};

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Json, SpecRoundTrip) {
  for (const auto& spec : mixed_specs(6)) {
    const PromptSpec back = spec_from_json(spec_to_json(spec));
    EXPECT_EQ(back.id, spec.id);
    EXPECT_EQ(back.text, spec.text);
    EXPECT_EQ(back.icl_example_ids, spec.icl_example_ids);
    EXPECT_EQ(back.strategy, spec.strategy);
    EXPECT_EQ(oracle_answer(back.instance, back.strategy), oracle_answer(spec.instance, spec.strategy));
    EXPECT_EQ(spec_to_json(back).dump(), spec_to_json(spec).dump());
  }
}

TEST(Json, EveryInstanceKindRoundTrips) {
  const Graph g = rank_query();
  std::vector<TaskInstance> all{
      make_layer_assignment("a", g, 0),
      make_sort_layers("b", g, 0),
      make_edge_length("c", g, 0, EdgeLayering::Random, 6, 3),
      make_graph_generation("e", 6, 7, DateRange{*parse_date("1970-01-01"), *parse_date("1970-12-31")}, 2.0),
      make_format_conversion("f", g, GraphFormat::GraphMLSubset, GraphFormat::DotSubset),
      make_property_check("g", g, GraphProperty::Flamboyous),
      make_graph_from_scene("h", g),
      make_scene_from_graph("i", g),
      make_svg_from_dot("j", g),
      TaskInstance{"k", crossing_query()},
  };
  for (const auto& inst : all) {
    const auto back = instance_from_json(instance_to_json(inst));
    EXPECT_EQ(back.kind(), inst.kind());
    EXPECT_EQ(instance_to_json(back).dump(), instance_to_json(inst).dump()) << to_string(inst.kind());
  }
}

TEST(Run, RecordsComeBackInSpecOrder) {
  const auto specs = mixed_specs(8);
  SlowFirst backend(specs);
  std::ostringstream sink;
  std::vector<std::string> seen;
  RunOptions opts;
  opts.max_concurrency = 6;
  opts.on_record = [&](const ExperimentRecord& r) { seen.push_back(r.spec_id); };
  const auto records = run_experiment(specs, backend, &sink, opts);
  ASSERT_EQ(records.size(), specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    EXPECT_EQ(records[i].spec_id, specs[i].id);
    EXPECT_EQ(seen[i], specs[i].id);
  }
  std::istringstream lines(sink.str());
  std::string line;
  std::size_t i = 0;
  while (std::getline(lines, line)) EXPECT_EQ(record_from_json(Json::parse(line)).spec_id, specs[i++].id);
  EXPECT_EQ(i, specs.size());
}

TEST(Run, OracleClosure) {
  const auto specs = mixed_specs(5);
  OracleResponder oracle(specs);
  for (const auto& r : run_experiment(specs, oracle, nullptr)) {
    if (r.task == TaskKind::EdgeLength) EXPECT_EQ(r.outcome.kind, OutcomeKind::Correct);
    if (r.task == TaskKind::LayerAssignment) EXPECT_DOUBLE_EQ(r.outcome.ratio, 1.0);
    if (r.task == TaskKind::SortLayers) EXPECT_EQ(r.outcome.matches_oracle, true);
    EXPECT_TRUE(r.error.empty());
    EXPECT_EQ(r.model, "oracle");
    EXPECT_FALSE(r.started_at.empty());
  }
}

TEST(Run, FailuresBecomeMalformedRecords) {
  const auto specs = mixed_specs(4);
  Failing backend;
  const auto records = run_experiment(specs, backend, nullptr, {.max_concurrency = 2});
  ASSERT_EQ(records.size(), specs.size());
  for (const auto& r : records) {
    if (r.task == TaskKind::EdgeLength) {
      EXPECT_FALSE(r.response.has_value());
      EXPECT_EQ(r.outcome.kind, OutcomeKind::Malformed);
      EXPECT_EQ(r.outcome.reason, reason::kTransport);
      EXPECT_EQ(r.attempts, 3);
      EXPECT_NE(r.error.find("down"), std::string::npos);
    } else if (r.task == TaskKind::SortLayers) {
      EXPECT_EQ(r.outcome.reason, reason::kBackend);
    } else {
      EXPECT_EQ(r.outcome.kind, OutcomeKind::PartialRatio);
    }
  }
}

TEST(Run, NoiseIsIndependentOfConcurrency) {
  const auto specs = mixed_specs(10);
  std::vector<std::string> a, b;
  NoisyResponder n1(specs, 0.3, 7), n2(specs, 0.3, 7);
  for (const auto& r : run_experiment(specs, n1, nullptr, {.max_concurrency = 1})) a.push_back(r.outcome.bucket());
  for (const auto& r : run_experiment(specs, n2, nullptr, {.max_concurrency = 8})) b.push_back(r.outcome.bucket());
  EXPECT_EQ(a, b);
}

TEST(Records, JsonlRoundTripAndRescore) {
  const auto dir = fresh_dir("layerlab_records_test");
  const auto specs = mixed_specs(4);
  NoisyResponder noisy(specs, 0.5, 3);
  const auto records = run_experiment(specs, noisy, nullptr);
  write_records(records, (dir / "sub" / "t.jsonl").string());
  const auto back = read_records((dir / "sub" / "t.jsonl").string());
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(record_to_json(back[i]).dump(), record_to_json(records[i]).dump());
    const auto again = rescore(back[i]);
    EXPECT_EQ(outcome_to_json(again.outcome).dump(), outcome_to_json(records[i].outcome).dump());
  }
  write_specs(specs, (dir / "s.jsonl").string());
  EXPECT_EQ(read_specs((dir / "s.jsonl").string()).size(), specs.size());
}

TEST(Records, ReadErrorsNameTheLine) {
  const auto dir = fresh_dir("layerlab_bad_records");
  {
    std::ofstream out(dir / "bad.jsonl");
    out << "{}\n";
  }
  EXPECT_THROW(read_records((dir / "bad.jsonl").string()), ParseError);
  {
    std::ofstream out(dir / "worse.jsonl");
    out << "not json\n";
  }
  try {
    read_specs((dir / "worse.jsonl").string());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Report, CountsBucketsAndPairsStrategies) {
  const TaskInstance q{"q", length_query()};
  std::vector<ExperimentRecord> records{
      score_response(build_prompt(q, Strategy::standard(), {}, 0), "30"),
      score_response(build_prompt(q, Strategy::steps(), {}, 0), "18"),
      score_response(build_prompt(TaskInstance{"r", length_examples()[2]}, Strategy::standard(), {}, 0), "23"),
      score_response(build_prompt(TaskInstance{"r", length_examples()[2]}, Strategy::steps(), {}, 0), "nope"),
  };
  const Report report = build_report(records);
  auto count = [&](const std::string& strategy, const std::string& bucket) {
    for (const auto& row : report.counts) {
      if (row.strategy == strategy && row.bucket == bucket) return row.count;
    }
    return 0L;
  };
  EXPECT_EQ(count("standard", "IncorrectOver"), 1);
  EXPECT_EQ(count("standard", "Correct"), 1);
  EXPECT_EQ(count("steps", "IncorrectUnder"), 1);
  EXPECT_EQ(count("steps", "Malformed"), 1);
  ASSERT_EQ(report.errors.size(), 2u);
  for (const auto& e : report.errors) {
    EXPECT_EQ(e.incorrect, 1);
    EXPECT_DOUBLE_EQ(e.mean_abs_error, 10.0 - 8.0 * (e.strategy == "steps"));
  }
  EXPECT_EQ(report.pairings.size(), 2u);

  const auto dir = fresh_dir("layerlab_report_test");
  EXPECT_EQ(write_report(report, dir.string()).size(), 5u);
  EXPECT_TRUE(fs::exists(dir / "report.csv"));
  EXPECT_TRUE(fs::exists(dir / "mean_error.csv"));
  EXPECT_TRUE(fs::exists(dir / "pairings.csv"));
  EXPECT_TRUE(fs::exists(dir / "hist_edge-length_standard.svg"));
  EXPECT_TRUE(inspect_svg(slurp(dir / "hist_edge-length_steps.svg")).well_formed);
  EXPECT_NE(slurp(dir / "report.csv").find("edge-length,standard,Correct,1"), std::string::npos);
}

TEST(Report, IsByteDeterministic) {
  const auto specs = mixed_specs(4);
  NoisyResponder noisy(specs, 0.4, 1);
  const auto report = build_report(run_experiment(specs, noisy, nullptr));
  const auto a = fresh_dir("layerlab_report_a"), b = fresh_dir("layerlab_report_b");
  write_report(report, a.string());
  write_report(report, b.string());
  for (const auto& entry : fs::directory_iterator(a)) {
    EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename()));
  }
}
