#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "layerlab/errors.hpp"
#include "oracles.hpp"

using namespace layerlab;
using namespace fixtures;

namespace {

ScoreOutcome score_text(const TaskInstance& inst, const std::string& text) {
  return score(inst.kind(), parse_response(inst.kind(), text), truth_for(inst));
}

Graph named(std::vector<std::pair<std::string, std::string>> edges, bool directed = false) {
  std::vector<Node> nodes;
  std::map<std::string, NodeId> ids;
  for (const char* n : {"Alice", "Bob", "Claire", "Daniel", "Ed"}) {
    ids[n] = static_cast<NodeId>(nodes.size());
    nodes.push_back({ids[n], std::string(n), std::nullopt});
  }
  std::vector<Edge> es;
  for (const auto& [a, b] : edges) es.push_back({ids.at(a), ids.at(b), std::nullopt});
  return Graph(nodes, es, directed);
}

}  // namespace

TEST(ScoreLayering, RecordedAnswersGetPartialCredit) {
  const auto inst = make_layer_assignment("q", rank_query(), 0);
  const auto standard = score_text(inst, read("answers/layer_assignment_standard.txt"));
  EXPECT_EQ(standard.kind, OutcomeKind::PartialRatio);
  EXPECT_DOUBLE_EQ(standard.ratio, 0.6);
  EXPECT_EQ(standard.bucket(), "0.6");
  const auto icl = score_text(inst, read("answers/layer_assignment_icl.txt"));
  EXPECT_DOUBLE_EQ(icl.ratio, 0.2);
  EXPECT_EQ(icl.valid, false);
}

TEST(ScoreLayering, FlagsMinimalLengthAssignments) {
  // Path 0-1-2: ranks 0,1,2 are the BFS answer; 0,1,0 also has length |E'|.
  const auto inst = make_layer_assignment("p", graph(3, {{0, 1}, {1, 2}}), 0);
  const auto out = score_text(inst, "0 - 0\n1 - 1\n2 - 0");
  EXPECT_NEAR(out.ratio, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(out.minimal_length, true);
  EXPECT_EQ(out.valid, false);
  EXPECT_DOUBLE_EQ(score_text(inst, "nothing here").ratio, 0.0);
}

TEST(ScoreOrdering, ShortRecordedInstance) {
  const TaskInstance inst{"s", median_short()};
  const auto out = score_text(inst, read("answers/sort_layers_short.txt"));
  ASSERT_EQ(out.kind, OutcomeKind::OrderingDelta);
  EXPECT_EQ(out.crossings_before, 7);
  const auto parsed = std::get<LayeredOrdering>(parse_response(TaskKind::SortLayers, read("answers/sort_layers_short.txt")));
  EXPECT_EQ(out.crossings_after, oracles::brute_force_total(parsed, median_short().graph));
  EXPECT_EQ(out.delta, *out.crossings_after < 7 ? Delta::Fewer : (*out.crossings_after == 7 ? Delta::Equal : Delta::More));
}

TEST(ScoreOrdering, LongRecordedAnswersAgainstBruteForce) {
  const TaskInstance inst{"l", median_long()};
  const long before = oracles::brute_force_total(median_long().input, median_long().graph);
  for (const char* f : {"answers/sort_layers_standard.txt", "answers/sort_layers_steps.txt", "answers/sort_layers_icl.txt"}) {
    const auto text = read(f);
    const auto out = score_text(inst, text);
    ASSERT_EQ(out.kind, OutcomeKind::OrderingDelta) << f;
    const auto parsed = std::get<LayeredOrdering>(parse_response(TaskKind::SortLayers, text));
    EXPECT_EQ(out.crossings_before, before);
    EXPECT_EQ(out.crossings_after, oracles::brute_force_total(parsed, median_long().graph)) << f;
  }
}

TEST(ScoreOrdering, RejectsNonPermutations) {
  const TaskInstance inst{"s", median_short()};
  const auto out = score_text(inst, "Layer 0: [0]\nLayer 1: [3]\nLayer 2: [7, 6, 8, 9, 2, 4]\nLayer 3: [5]");
  EXPECT_EQ(out.kind, OutcomeKind::Malformed);
  EXPECT_EQ(out.reason, reason::kNonPermutation);
}

TEST(ScoreNumbers, RecordedCrossingAnswers) {
  const TaskInstance q{"q", crossing_query()};
  const auto over = score_text(q, read("answers/count_crossings_standard.txt"));
  EXPECT_EQ(over.kind, OutcomeKind::IncorrectOver);
  EXPECT_EQ(over.abs_error, 1);
  const TaskInstance ex{"e", crossing_examples()[2]};
  EXPECT_EQ(score_text(ex, "3").kind, OutcomeKind::Correct);
  EXPECT_EQ(score_text(ex, "2").kind, OutcomeKind::IncorrectUnder);
}

TEST(ScoreNumbers, RecordedEdgeLengthAnswers) {
  const TaskInstance q{"q", length_query()};
  EXPECT_EQ(score_text(q, read("answers/edge_length_standard.txt")).kind, OutcomeKind::IncorrectOver);
  EXPECT_EQ(score_text(q, read("answers/edge_length_steps.txt")).kind, OutcomeKind::IncorrectUnder);
  EXPECT_EQ(score_text(q, read("answers/edge_length_icl.txt")).kind, OutcomeKind::IncorrectUnder);
  EXPECT_EQ(score_text(q, "20").kind, OutcomeKind::Correct);
  const TaskInstance ex{"e", length_examples()[2]};
  EXPECT_EQ(score_text(ex, "23").kind, OutcomeKind::Correct);
}

TEST(ScoreProperty, YesNo) {
  const auto bulb = make_property_check("b", graph(2, {{0, 1}, {0, 1}, {1, 0}, {1, 0}}), GraphProperty::Bulbaceous);
  EXPECT_EQ(score_text(bulb, read("answers/property_verbose.txt")).kind, OutcomeKind::Correct);
  EXPECT_EQ(score_text(bulb, read("answers/property_no.txt")).kind, OutcomeKind::IncorrectUnder);
  const auto flam = make_property_check("f", graph(3, {{0, 1}, {0, 1}, {0, 2}, {1, 2}, {1, 2}}), GraphProperty::Flamboyous);
  EXPECT_EQ(score_text(flam, read("answers/property_no.txt")).kind, OutcomeKind::Correct);
  EXPECT_EQ(score_text(flam, read("answers/property_yes.txt")).kind, OutcomeKind::IncorrectOver);
}

TEST(ScoreGeneration, RecordedAnswerMeetsConstraints) {
  const auto inst = make_graph_generation("g", 5, 7, DateRange{*parse_date("1970-01-01"), *parse_date("1970-12-31")}, 2.0);
  EXPECT_EQ(score_text(inst, read("answers/graph_generation_standard.txt")).kind, OutcomeKind::Correct);
  const auto tight = make_graph_generation("g", 5, 7, DateRange{*parse_date("1970-01-01"), *parse_date("1970-03-31")}, 5.0);
  const auto out = score_text(tight, read("answers/graph_generation_standard.txt"));
  EXPECT_EQ(out.kind, OutcomeKind::PartialRatio);
  EXPECT_LT(out.ratio, 1.0);
}

TEST(ScoreConversion, EdgesNodesAndFormat) {
  const Graph g = rank_query();
  const auto inst = make_format_conversion("c", g, GraphFormat::EdgeListText, GraphFormat::DotSubset);
  EXPECT_EQ(score_text(inst, "```dot\n" + emit_graph(g, GraphFormat::DotSubset) + "\n```").kind, OutcomeKind::Correct);
  const auto wrong_format = score_text(inst, "```json\n" + emit_graph(g, GraphFormat::JsonGraph) + "\n```");
  EXPECT_NE(wrong_format.kind, OutcomeKind::Correct);
  const Graph fewer = g.with_edges({g.edges().begin(), g.edges().end() - 1});
  EXPECT_NE(score_text(inst, emit_graph(fewer, GraphFormat::DotSubset)).kind, OutcomeKind::Correct);
}

TEST(ScoreScene, RecordedDirectedAnswerIsEquivalent) {
  const TaskInstance inst{"scene", GraphFromSceneTask{write_scene(office_truth()), office_truth()}};
  const auto out = score_text(inst, read("answers/graph_from_scene_directed.txt"));
  EXPECT_EQ(out.kind, OutcomeKind::Correct);
}

TEST(ScoreScene, MissingAndExtraEdges) {
  const Graph truth = office_truth();
  const auto missing = score_scene_graph(
      named({{"Alice", "Bob"}, {"Alice", "Claire"}, {"Bob", "Daniel"}, {"Daniel", "Claire"}, {"Daniel", "Ed"}}), truth);
  EXPECT_EQ(missing.kind, OutcomeKind::PartialRatio);
  EXPECT_NEAR(missing.ratio, 5.0 / 6.0, 1e-12);
  const auto weighted = score_text(TaskInstance{"s", GraphFromSceneTask{"", truth}},
                                   read("answers/graph_from_scene_weighted.txt"));
  EXPECT_NEAR(weighted.ratio, 5.0 / 6.0, 1e-12);
  EXPECT_EQ(weighted.warnings.size(), 1u);
  EXPECT_EQ(score_scene_graph(named({}), truth).ratio, 0.0);
}

TEST(ScoreSceneText, EveryEdgeNeedsASentence) {
  const auto inst = make_scene_from_graph("t", office_truth());
  EXPECT_EQ(score_text(inst, write_scene(office_truth())).kind, OutcomeKind::Correct);
  const auto out = score_text(inst, "Alice greets Bob. Daniel talks to Ed. Claire and Ed leave.");
  EXPECT_EQ(out.kind, OutcomeKind::PartialRatio);
  EXPECT_NEAR(out.ratio, 3.0 / 6.0, 1e-12);
}

TEST(ScoreSvg, CountsNodesAndEdges) {
  const Graph g = rank_query();
  const auto inst = make_svg_from_dot("v", g);
  EXPECT_EQ(score_text(inst, render_layout_svg(g, circular_positions(g, 100)).str()).kind, OutcomeKind::Correct);
  const Graph fewer = graph(9, {{0, 1}});
  EXPECT_NE(score_text(inst, render_layout_svg(fewer, circular_positions(fewer, 100)).str()).kind,
            OutcomeKind::Correct);
}

TEST(Score, MismatchedTypesThrow) {
  EXPECT_THROW(score(TaskKind::EdgeLength, Parsed{true}, Truth{20L}), ScoreTypeError);
  EXPECT_THROW(score(TaskKind::PropertyCheck, Parsed{true}, Truth{20L}), ScoreTypeError);
  const auto m = score(TaskKind::EdgeLength, Parsed{Malformed{"no_answer", ""}}, Truth{20L});
  EXPECT_EQ(m.kind, OutcomeKind::Malformed);
}

TEST(Buckets, CanonicalOrder) {
  EXPECT_EQ(bucket_order(TaskKind::SortLayers), (std::vector<std::string>{"fewer", "equal", "more", "Malformed"}));
  EXPECT_EQ(bucket_order(TaskKind::CountCrossings).front(), "Correct");
  EXPECT_EQ(bucket_order(TaskKind::LayerAssignment).size(), 12u);
  ScoreOutcome o;
  o.kind = OutcomeKind::PartialRatio;
  o.ratio = 0.99;
  EXPECT_EQ(o.bucket(), "0.9");
  o.ratio = 1.0;
  EXPECT_EQ(o.bucket(), "1.0");
}
