// Copyright 2026 The vground Authors.
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

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "vground/miner/conllu.h"
#include "vground/miner/pairs.h"
#include "vground/util/binio.h"
#include "vground/util/error.h"
#include "vground/util/rng.h"
#include "vground/util/text.h"

using namespace vground;
using namespace vground::miner;

namespace {

const std::string kCutBread =
    "# sent_id = cut1\n"
    "# text = she cut the bread\n"
    "1\tshe\tshe\tPRON\t_\t_\t2\tnsubj\t_\t_\n"
    "2\tcut\tcut\tVERB\t_\t_\t0\troot\t_\t_\n"
    "3\tthe\tthe\tDET\t_\t_\t4\tdet\t_\t_\n"
    "4\tbread\tbread\tNOUN\t_\t_\t2\tobj\t_\t_\n";

const std::string kViolinSuit =
    "1\the\the\tPRON\t_\t_\t2\tnsubj\t_\t_\n"
    "2\tplayed\tplay\tVERB\t_\t_\t0\troot\t_\t_\n"
    "3\tthe\tthe\tDET\t_\t_\t4\tdet\t_\t_\n"
    "4\tviolin\tviolin\tNOUN\t_\t_\t2\tobj\t_\t_\n"
    "5\tand\tand\tCCONJ\t_\t_\t6\tcc\t_\t_\n"
    "6\twore\twear\tVERB\t_\t_\t2\tconj\t_\t_\n"
    "7\ta\ta\tDET\t_\t_\t8\tdet\t_\t_\n"
    "8\tsuit\tsuit\tNOUN\t_\t_\t6\tobj\t_\t_\n";

MinedPair mp(std::string v, std::string o, std::uint64_t f, std::vector<std::string> ids = {}) {
  if (ids.empty()) {
    for (std::uint64_t i = 0; i < f; ++i) ids.push_back("x" + std::to_string(i));
  }
  return MinedPair{std::move(v), std::move(o), f, std::move(ids)};
}

std::vector<std::pair<std::string, std::string>> vo(const std::vector<MinedPair>& pairs) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : pairs) out.emplace_back(p.verb, p.object);
  return out;
}

std::string fixture(const std::string& name) {
  return std::string(VGROUND_TEST_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("parse_conllu: empty input yields no sentences") {
  CHECK(parse_conllu("").empty());
  CHECK(parse_conllu("\n\n# only a comment\n").empty());
}

TEST_CASE("parse_conllu: she cut the bread") {
  const auto s = parse_conllu(kCutBread);
  REQUIRE(s.size() == 1);
  CHECK(s[0].sentence_id == "cut1");
  REQUIRE(s[0].tokens.size() == 4);
  const DepToken& bread = s[0].token(4);
  CHECK(bread.surface_form == "bread");
  CHECK(bread.deprel == "obj");
  CHECK(bread.head == 2);
  CHECK(s[0].token(bread.head).lemma == "cut");
}

TEST_CASE("parse_conllu: nine columns is a parse error naming the line") {
  const std::string text = kCutBread + "\n1\ta\ta\tNOUN\t_\t_\t0\troot\t_\n";
  try {
    parse_conllu(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 8);
  }
}

TEST_CASE("parse_conllu: non-integer ID or HEAD is a parse error") {
  CHECK_THROWS_AS(parse_conllu("x\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n"), ParseError);
  CHECK_THROWS_AS(parse_conllu("1\ta\ta\tNOUN\t_\t_\troot\troot\t_\t_\n"), ParseError);
}

TEST_CASE("parse_conllu: head out of range names the sentence") {
  const std::string text =
      "# sent_id = broken\n"
      "1\ta\ta\tVERB\t_\t_\t0\troot\t_\t_\n"
      "2\tb\tb\tNOUN\t_\t_\t7\tobj\t_\t_\n";
  try {
    parse_conllu(text);
    FAIL("expected DataError");
  } catch (const ParseError&) {
    FAIL("structural errors are not parse errors");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("broken") != std::string::npos);
  }
}

TEST_CASE("parse_conllu: self-loop and gaps are structural errors") {
  CHECK_THROWS_AS(parse_conllu("1\ta\ta\tVERB\t_\t_\t1\troot\t_\t_\n"), DataError);
  CHECK_THROWS_AS(parse_conllu("1\ta\ta\tVERB\t_\t_\t0\troot\t_\t_\n"
                               "3\tb\tb\tNOUN\t_\t_\t1\tobj\t_\t_\n"),
                  DataError);
}

TEST_CASE("parse_conllu: ranges and empty nodes are skipped; ordinals used as ids") {
  const std::string text =
      "1-2\tDon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "1\tDo\tdo\tAUX\t_\t_\t3\taux\t_\t_\n"
      "2\tn't\tnot\tPART\t_\t_\t3\tadvmod\t_\t_\n"
      "3\twear\twear\tVERB\t_\t_\t0\troot\t_\t_\n"
      "3.1\twear\twear\tVERB\t_\t_\t_\t_\t3:conj\t_\n"
      "4\tit\tit\tPRON\t_\t_\t3\tobj\t_\t_\n"
      "\n" +
      kViolinSuit;
  const auto s = parse_conllu(text);
  REQUIRE(s.size() == 2);
  CHECK(s[0].sentence_id == "1");
  CHECK(s[0].tokens.size() == 4);
  CHECK(s[1].sentence_id == "2");
}

TEST_CASE("parse_conllu: lemmas are lowercased; '_' falls back to the form") {
  const auto s = parse_conllu(
      "1\tEat\tEat\tVERB\t_\t_\t0\troot\t_\t_\n"
      "2\tBanana\t_\tNOUN\t_\t_\t1\tobj\t_\t_\n");
  REQUIRE(s.size() == 1);
  CHECK(s[0].token(1).lemma == "eat");
  CHECK(s[0].token(2).lemma == "banana");
  CHECK(s[0].token(2).surface_form == "Banana");
}

TEST_CASE("extract_pairs examples") {
  const auto cut = parse_conllu(kCutBread);
  const auto pairs = extract_pairs(cut[0]);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].verb == "cut");
  CHECK(pairs[0].object == "bread");
  CHECK(pairs[0].frequency == 1);
  CHECK(pairs[0].source_ids == std::vector<std::string>{"cut1"});

  const auto vs = parse_conllu(kViolinSuit);
  CHECK(vo(extract_pairs(vs[0])) ==
        std::vector<std::pair<std::string, std::string>>{{"play", "violin"}, {"wear", "suit"}});

  const auto no_verb = parse_conllu(
      "1\tworth\tworth\tADJ\t_\t_\t0\troot\t_\t_\n"
      "2\tprice\tprice\tNOUN\t_\t_\t1\tobj\t_\t_\n");
  CHECK(extract_pairs(no_verb[0]).empty());
}

TEST_CASE("extract_pairs accepts dobj and ignores other relations") {
  const auto s = parse_conllu(
      "1\thit\thit\tVERB\t_\t_\t0\troot\t_\t_\n"
      "2\tnail\tnail\tNOUN\t_\t_\t1\tdobj\t_\t_\n"
      "3\twall\twall\tNOUN\t_\t_\t1\tobl\t_\t_\n"
      "4\thim\the\tPRON\t_\t_\t1\tiobj\t_\t_\n");
  CHECK(vo(extract_pairs(s[0])) ==
        std::vector<std::pair<std::string, std::string>>{{"hit", "nail"}});
  CHECK(extract_pairs(s[0], {"obl"}).size() == 1);
}

TEST_CASE("filter_pairs examples") {
  const std::vector<MinedPair> pairs = {mp("name", "suit", 9), mp("wear", "suit", 4)};
  const auto kept = filter_pairs(pairs, std::set<std::string>{"wear", "cut"}, {"suit"}, 1);
  CHECK(vo(kept) == std::vector<std::pair<std::string, std::string>>{{"wear", "suit"}});
  CHECK(filter_pairs(pairs, std::nullopt, {"bread"}, 1).empty());
  CHECK(filter_pairs(std::vector<MinedPair>{mp("cut", "bread", 2)}, std::nullopt, {"bread"}, 3)
            .empty());
  CHECK_THROWS_AS(filter_pairs(pairs, std::nullopt, {}, 1), ConfigError);
}

TEST_CASE("aggregate_pairs examples") {
  CHECK(aggregate_pairs(std::vector<MinedPair>{}).empty());
  const auto merged = aggregate_pairs(std::vector<MinedPair>{mp("cut", "bread", 1, {"s1"}),
                                                             mp("cut", "bread", 1, {"s2"})});
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].frequency == 2);
  CHECK(merged[0].source_ids == std::vector<std::string>{"s1", "s2"});

  const auto sorted = aggregate_pairs(std::vector<MinedPair>{
      mp("wear", "suit", 1), mp("cut", "bread", 1), mp("play", "violin", 1)});
  CHECK(vo(sorted) == std::vector<std::pair<std::string, std::string>>{
                          {"cut", "bread"}, {"play", "violin"}, {"wear", "suit"}});
}

TEST_CASE("miner properties over random pair lists") {
  const std::vector<std::string> verbs = {"cut", "play", "wear", "eat", "hold"};
  const std::vector<std::string> objects = {"bread", "violin", "suit", "knife", "cup"};
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    Rng rng(trial);
    std::vector<MinedPair> pairs;
    const std::size_t n = rng.uniform_index(30);
    for (std::size_t i = 0; i < n; ++i) {
      pairs.push_back(mp(verbs[rng.uniform_index(verbs.size())],
                         objects[rng.uniform_index(objects.size())], 1 + rng.uniform_index(3)));
    }
    const auto agg = aggregate_pairs(pairs);
    CHECK(aggregate_pairs(agg) == agg);
    std::uint64_t total_in = 0, total_out = 0;
    for (const auto& p : pairs) total_in += p.frequency;
    for (const auto& p : agg) {
      total_out += p.frequency;
      CHECK(p.frequency == p.source_ids.size());
    }
    CHECK(total_in == total_out);

    const std::set<std::string> ow = {objects[trial % 5], objects[(trial + 2) % 5]};
    const std::set<std::string> vw = {verbs[trial % 5]};
    const std::uint64_t min_f = 1 + trial % 3;
    const auto all_verbs = filter_pairs(agg, std::nullopt, ow, min_f);
    const auto some_verbs = filter_pairs(agg, vw, ow, min_f);
    CHECK(all_verbs.size() <= agg.size());
    for (const auto& p : some_verbs) {
      CHECK(std::find(all_verbs.begin(), all_verbs.end(), p) != all_verbs.end());
    }
  }
}

TEST_CASE("format_pairs_tsv") {
  CHECK(format_pairs_tsv(std::vector<MinedPair>{mp("cut", "bread", 2), mp("wear", "suit", 1)}) ==
        "cut\tbread\t2\nwear\tsuit\t1\n");
}

TEST_CASE("hand-parsed fixture: raw aggregate and filtered output") {
  const std::vector<std::string> files = {fixture("miner_fixture.conllu")};
  const auto raw = mine_files(files);
  CHECK(format_pairs_tsv(raw) == read_file(fixture("miner_fixture_raw.tsv")));

  const auto verbs = read_word_list(fixture("miner_fixture_verbs.txt"));
  const auto objects = read_word_list(fixture("miner_fixture_objects.txt"));
  const auto kept = filter_pairs(raw, std::set<std::string>(verbs.begin(), verbs.end()),
                                 std::set<std::string>(objects.begin(), objects.end()), 1);
  CHECK(format_pairs_tsv(kept) == read_file(fixture("miner_fixture_expected.tsv")));

  const auto frequent = filter_pairs(raw, std::set<std::string>(verbs.begin(), verbs.end()),
                                     std::set<std::string>(objects.begin(), objects.end()), 2);
  CHECK(format_pairs_tsv(frequent) == "cut\tbread\t2\nplay\tviolin\t2\n");

  // The block without a sent_id comment is the 15th.
  const auto sentences = parse_conllu(read_file(fixture("miner_fixture.conllu")));
  REQUIRE(sentences.size() == 20);
  CHECK(sentences[14].sentence_id == "15");
  for (const auto& p : raw) {
    if (p.verb == "cut") CHECK(p.source_ids == std::vector<std::string>{"s01", "s13"});
    if (p.verb == "play" && p.object == "drum") CHECK(p.source_ids == std::vector<std::string>{"15"});
  }
}

TEST_CASE("mining is byte-deterministic") {
  const std::vector<std::string> files = {fixture("miner_fixture.conllu")};
  CHECK(format_pairs_tsv(mine_files(files)) == format_pairs_tsv(mine_files(files)));
}
