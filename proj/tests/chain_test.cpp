#include <gtest/gtest.h>

#include "lawtrace/chain.hpp"
#include "lawtrace/prompts.hpp"
#include "support.hpp"

using namespace lawtrace;
using namespace lawtrace::testing;

namespace {

std::vector<std::string> fixture_queue() { return {fixture_output(1), fixture_output(2), fixture_output(3)}; }

}  // namespace

TEST(Prompts, TemplatesMatchRecordedHashes) {
  for (const auto* tpl : {&translation_template(), &comparison_template()}) {
    EXPECT_EQ(sha256_hex(tpl->text), tpl->recorded_sha256);
  }
  EXPECT_EQ(translation_template().text, slurp(LAWTRACE_RESOURCE_DIR "/prompts/translation.txt"));
  EXPECT_EQ(comparison_template().text, slurp(LAWTRACE_RESOURCE_DIR "/prompts/comparison.txt"));
  // Kept byte for byte, spelling included.
  EXPECT_NE(translation_template().text.find("langaguage"), std::string_view::npos);
}

TEST(Prompts, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Prompts, Translation) {
  const auto l1 = parse_trace(listing1());
  const std::string p = build_translation_prompt(l1);
  EXPECT_TRUE(p.starts_with(translation_template().text));
  EXPECT_NE(p.find("What Rights do You Have"), std::string::npos);
  EXPECT_NE(p.find(listing1()), std::string::npos);
  EXPECT_EQ(p, build_translation_prompt(l1));
  const std::string p2 = build_translation_prompt(parse_trace(listing2()));
  EXPECT_NE(p2.find(listing2()), std::string::npos);
  EXPECT_EQ(p.substr(translation_template().text.size()), "\n\n```\n" + listing1() + "```\n");
}

TEST(Prompts, Comparison) {
  const std::string eu = fixture_output(1), pl = fixture_output(2);
  const std::string p = build_comparison_prompt(eu, pl);
  EXPECT_TRUE(p.starts_with(comparison_template().text));
  const auto s1 = p.find("=== SOURCE 1 ===\n" + eu), s2 = p.find("=== SOURCE 2 ===\n" + pl);
  ASSERT_NE(s1, std::string::npos);
  ASSERT_NE(s2, std::string::npos);
  EXPECT_LT(s1, s2);
  const std::string swapped = build_comparison_prompt(pl, eu);
  EXPECT_NE(swapped, p);
  EXPECT_NE(swapped.find("=== SOURCE 1 ===\n" + pl), std::string::npos);
  EXPECT_THROW(build_comparison_prompt(eu, ""), Error);
  EXPECT_THROW(build_comparison_prompt("", pl), Error);
}

TEST(RunChain, FixtureOutputs) {
  const auto l1 = parse_trace(listing1()), l2 = parse_trace(listing2());
  MockClient mock(fixture_queue());
  const ChainRun run = run_chain(l1, l2, mock, {});
  EXPECT_EQ(mock.calls(), 3u);
  ASSERT_TRUE(run.complete());
  EXPECT_EQ(run.step2_output(), fixture_output(3));
  EXPECT_EQ(run.step1_outputs(), (std::vector<std::string>{fixture_output(1), fixture_output(2)}));
  EXPECT_EQ(run.inputs, (std::vector<std::string>{listing1(), listing2()}));

  // The backend saw exactly what the chain built.
  const auto prompts = mock.recorded_prompts();
  ASSERT_EQ(prompts.size(), 3u);
  EXPECT_EQ(prompts[0], build_translation_prompt(l1));
  EXPECT_EQ(prompts[1], build_translation_prompt(l2));
  EXPECT_EQ(prompts[2], build_comparison_prompt(fixture_output(1), fixture_output(2)));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(run.steps[i].prompt, prompts[i]);
}

TEST(RunChain, StepTwoSeesOnlyExplanations) {
  const auto l1 = parse_trace(listing1()), l2 = parse_trace(listing2());
  MockClient mock(fixture_queue());
  const ChainRun run = run_chain(l1, l2, mock, {});
  const std::string& p = run.steps[2].prompt;
  EXPECT_NE(p.find(fixture_output(1)), std::string::npos);
  EXPECT_NE(p.find(fixture_output(2)), std::string::npos);
  EXPECT_EQ(p.find(listing1()), std::string::npos);
  EXPECT_EQ(p.find(listing2()), std::string::npos);
  // Not even a single tree line of either trace.
  for (const auto& term : extract_terms(l1)) {
    EXPECT_EQ(p.find(term.text + " [FACT]"), std::string::npos);
  }
  EXPECT_EQ(p.find("Explanation:\n\nhas_right("), std::string::npos);
}

TEST(RunChain, FailureAtComparisonKeepsExplanations) {
  const auto l1 = parse_trace(listing1()), l2 = parse_trace(listing2());
  MockClient mock({fixture_output(1), fixture_output(2)});
  try {
    run_chain(l1, l2, mock, {});
    FAIL();
  } catch (const ChainError& e) {
    EXPECT_EQ(e.step(), "compare");
    EXPECT_EQ(e.partial().step1_outputs(), (std::vector<std::string>{fixture_output(1), fixture_output(2)}));
    EXPECT_FALSE(e.partial().complete());
    EXPECT_EQ(e.partial().failure->kind, "exhausted");
  }
}

TEST(RunRepeated, CyclingMockInIndexOrder) {
  const auto l1 = parse_trace(listing1()), l2 = parse_trace(listing2());
  MockClient mock(fixture_queue(), true);
  auto runs = run_repeated(l1, l2, mock, {}, 5);
  ASSERT_EQ(runs.size(), 5u);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    EXPECT_EQ(runs[i].run_index, i);
    EXPECT_TRUE(runs[i].complete());
  }
  EXPECT_EQ(mock.calls(), 15u);
}

TEST(RunRepeated, SingleRunEqualsRunChain) {
  const auto l1 = parse_trace(listing1()), l2 = parse_trace(listing2());
  MockClient a(fixture_queue()), b(fixture_queue());
  auto runs = run_repeated(l1, l2, a, {}, 1);
  auto single = run_chain(l1, l2, b, {});
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0].steps.size(), single.steps.size());
  for (std::size_t i = 0; i < single.steps.size(); ++i) {
    EXPECT_EQ(runs[0].steps[i].prompt, single.steps[i].prompt);
    EXPECT_EQ(runs[0].steps[i].output, single.steps[i].output);
  }
  EXPECT_EQ(runs[0].inputs, single.inputs);
}

TEST(RunRepeated, DeterministicMockGivesIdenticalRuns) {
  const auto l1 = parse_trace(listing1()), l2 = parse_trace(listing2());
  for (std::size_t parallel : {1u, 4u}) {
    MockClient mock(fixture_queue(), true);
    auto runs = run_repeated(l1, l2, mock, {}, 10, parallel);
    ASSERT_EQ(runs.size(), 10u);
    for (const auto& run : runs) {
      ASSERT_TRUE(run.complete());
      EXPECT_EQ(run.steps, runs[0].steps) << "run " << run.run_index;
    }
  }
}

TEST(RunRepeated, FailuresDoNotAbortOtherRuns) {
  const auto l1 = parse_trace(listing1()), l2 = parse_trace(listing2());
  // Enough for two full runs and one step of the third.
  std::vector<std::string> q;
  for (int i = 0; i < 2; ++i) {
    for (const auto& r : fixture_queue()) q.push_back(r);
  }
  q.push_back(fixture_output(1));
  MockClient mock(q);
  auto runs = run_repeated(l1, l2, mock, {}, 4);
  ASSERT_EQ(runs.size(), 4u);
  EXPECT_TRUE(runs[0].complete());
  EXPECT_TRUE(runs[1].complete());
  EXPECT_FALSE(runs[2].complete());
  EXPECT_EQ(runs[2].failure->step, "explain_2");
  EXPECT_EQ(runs[2].steps.size(), 1u);
  EXPECT_EQ(runs[3].failure->step, "explain_1");
  EXPECT_THROW(run_repeated(l1, l2, mock, {}, 0), Error);
}
