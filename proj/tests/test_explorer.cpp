// Copyright 2026 The relocheck Authors
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


#include <set>

#include <gtest/gtest.h>

#include "reloc/explorer.hpp"
#include "reloc/parser.hpp"
#include "support/oracles.hpp"

namespace reloc {
namespace {

Expr P(const char *s) { return erase_ascriptions(parse_expr(s)); }

const char *kRand = "let rand = λ (). let y = ref false in fork { y <- true }; !y in ";

std::set<std::string> values(const ExploreReport &r) {
  std::set<std::string> out;
  for (const Outcome &o : r.outcomes) out.insert(pretty(o.value));
  return out;
}

std::set<std::string> normalized(const ExploreReport &r) {
  std::set<std::string> out;
  for (const Outcome &o : r.outcomes) out.insert(oracle::normalize_outcome(o.value, o.heap));
  return out;
}

TEST(Canonicalize, RenamingInvariance) {
  Config a;
  a.heap.cells = {Val(Expr::integer(1)), Val(Expr::integer(2))};
  a.threads = {Expr::pair(Expr::loc(0), Expr::loc(1))};
  Config b;
  b.heap.cells = {Val(Expr::integer(2)), Val(Expr::integer(1))};
  b.threads = {Expr::pair(Expr::loc(1), Expr::loc(0))};
  EXPECT_EQ(canonicalize(a), canonicalize(b));
}

TEST(Canonicalize, ThreadCountMatters) {
  Config a = init_config(Expr::unit());
  Config b = a;
  b.threads.push_back(Expr::unit());
  EXPECT_NE(canonicalize(a), canonicalize(b));
}

TEST(Canonicalize, DistinguishesContents) {
  Config a;
  a.heap.cells = {Val(Expr::integer(1))};
  a.threads = {Expr::load(Expr::loc(0))};
  Config b = a;
  b.heap.cells[0] = Val(Expr::integer(2));
  EXPECT_NE(canonicalize(a), canonicalize(b));
}

TEST(Canonicalize, GarbageCellsIgnored) {
  Config a;
  a.heap.cells = {Val(Expr::integer(1)), Val(Expr::integer(9))};
  a.threads = {Expr::load(Expr::loc(0))};
  Config b = a;
  b.heap.cells[1] = Val(Expr::integer(10));
  EXPECT_EQ(canonicalize(a), canonicalize(b));
}

TEST(Canonicalize, RandomRenamings) {
  oracle::Rng rng(100);
  for (int i = 0; i < 100; ++i) {
    const Config cfg = oracle::random_config(rng);
    const Config renamed = oracle::random_renaming(cfg, rng);
    ASSERT_EQ(canonicalize(cfg), canonicalize(renamed));
  }
}

TEST(ExploreAll, Rand) {
  ExploreReport r = explore_all(P((std::string(kRand) + "rand ()").c_str()));
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(values(r), (std::set<std::string>{"true", "false"}));
}

TEST(ExploreAll, Deterministic) {
  ExploreReport r = explore_all(P("π1 (1, 2)"));
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(values(r), (std::set<std::string>{"1"}));
}

TEST(ExploreAll, LostUpdate) {
  const Expr e = P(
      "let c = ref 0 in let d = ref 0 in "
      "fork { let n = !c in c <- n + 1; d <- !d + 0; CAS(d, 0, 1); () }; "
      "fork { let n = !c in c <- n + 1; (rec w u = if CAS(d, 1, 2) then () else w ()) () }; "
      "(rec wait u = if !d = 2 then () else wait ()) (); !c");
  ExploreReport r = explore_all(e);
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(values(r), (std::set<std::string>{"1", "2"}));
}

TEST(ExploreAll, ForkedThreadsNeedNotFinish) {
  ExploreReport r = explore_all(P("fork { (rec f x = f x) () }; 3"));
  EXPECT_EQ(values(r), (std::set<std::string>{"3"}));
  EXPECT_TRUE(r.complete);
}

TEST(ExploreAll, StuckReported) {
  ExploreReport r = explore_all(P("fork { π1 5 }; 3"));
  ASSERT_FALSE(r.stuck.empty());
  for (const StuckThread &st : r.stuck) {
    EXPECT_EQ(st.thread, 1u);
    EXPECT_EQ(st.redex, P("π1 5"));
  }
  EXPECT_EQ(values(r), (std::set<std::string>{"3"}));
}

TEST(ExploreAll, BoundsAreReported) {
  Bounds b;
  b.max_steps = 50;
  b.cycle_is_step_bound = true;
  ExploreReport r = explore_all(P("(rec f x = f x) ()"), b);
  EXPECT_TRUE(r.outcomes.empty());
  EXPECT_FALSE(r.complete);
  EXPECT_EQ(r.bound_hit, BoundHit::Steps);

  Bounds t;
  t.max_threads = 2;
  ExploreReport rt = explore_all(P("fork { () }; fork { () }; 1"), t);
  EXPECT_FALSE(rt.complete);
  EXPECT_EQ(rt.bound_hit, BoundHit::Threads);

  Bounds c;
  c.max_configs = 3;
  ExploreReport rc = explore_all(P("1 + 2 + 3 + 4 + 5"), c);
  EXPECT_FALSE(rc.complete);
  EXPECT_EQ(rc.bound_hit, BoundHit::Configs);
}

TEST(ExploreAll, CyclesPrunedByDefault) {
  ExploreReport r = explore_all(P("(rec f x = f x) ()"));
  EXPECT_TRUE(r.outcomes.empty());
  EXPECT_TRUE(r.complete);
}

TEST(ExploreAll, MatchesNaiveEnumerator) {
  oracle::Rng rng(8);
  int compared = 0;
  int attempts = 0;
  while (compared < 50) {
    ASSERT_LT(++attempts, 5000);
    const Expr e = oracle::random_small_program(rng);
    oracle::NaiveReport naive = oracle::naive_explore(e, 10);
    if (naive.step_bound_hit || naive.longest_path > 10) continue;
    ++compared;
    ExploreReport r = explore_all(e);
    EXPECT_TRUE(r.complete);
    EXPECT_EQ(normalized(r), naive.outcomes) << pretty(e);
    EXPECT_EQ(!r.stuck.empty(), naive.stuck) << pretty(e);
  }
}

TEST(ExploreAll, OutcomesReplay) {
  oracle::Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    const Expr e = oracle::random_small_program(rng);
    for (const Outcome &o : explore_all(e).outcomes) {
      Config c = replay(e, o.trace);
      EXPECT_EQ(Val(c.threads[0]), o.value);
      EXPECT_TRUE(c.heap == o.heap);
    }
  }
}

TEST(SearchOutcome, Examples) {
  auto is_true = [](const Val &v, const Heap &) { return v == Val(Expr::boolean(true)); };
  SearchResult r = search_outcome(P((std::string(kRand) + "rand ()").c_str()), is_true);
  EXPECT_TRUE(r.found);

  auto is_six = [](const Val &v, const Heap &) { return v == Val(Expr::integer(6)); };
  SearchResult none = search_outcome(P("5"), is_six);
  EXPECT_FALSE(none.found);
  EXPECT_TRUE(none.complete);

  const Expr inc_s = P(
      "let acquire = rec acquire l = if CAS(l, false, true) then () else acquire l in "
      "let release = λ l. l <- false in "
      "let inc_s = λ c l. acquire l; let n = !c in c <- 1 + n; release l; n in "
      "inc_s (ref 0) (ref false)");
  auto is_zero = [](const Val &v, const Heap &) { return v == Val(Expr::integer(0)); };
  SearchResult z = search_outcome(inc_s, is_zero);
  ASSERT_TRUE(z.found);
  Config c = replay(inc_s, z.found->trace);
  EXPECT_EQ(c.threads[0], Expr::integer(0));
}

TEST(SearchOutcome, GoalSeesHeap) {
  auto holds_two = [](const Val &v, const Heap &h) {
    return v.kind() == ExprKind::Loc && h.at(v.expr().loc_id()) == Val(Expr::integer(2));
  };
  SearchResult r = search_outcome(P("let l = ref 0 in fork { l <- 2 }; l"), holds_two);
  EXPECT_TRUE(r.found);
}

}  // namespace
}  // namespace reloc
