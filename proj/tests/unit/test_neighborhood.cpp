#include <doctest.h>

#include "aaevar/error.hpp"
#include "aaevar/neighborhood.hpp"
#include "oracles.hpp"

using namespace aaevar;

namespace {

Pronunciation P(std::string_view s) { return Pronunciation::parse(s); }

std::vector<oracle::NeighborHit> hits(const NeighborSet& s) {
  std::vector<oracle::NeighborHit> out;
  for (const auto& n : s.neighbors) out.push_back({n.word, n.pron.str()});
  return out;
}

const std::vector<std::string> kToyPhones{"T", "EH1", "S", "G", "N", "AA1", "K"};

Pronunciation random_pron(Rng& rng, std::size_t max_len) {
  std::vector<Phone> p;
  const auto n = 1 + rng.below(max_len);
  for (std::size_t i = 0; i < n; ++i) p.push_back(Phone::of(rng.pick(kToyPhones)));
  return Pronunciation(p);
}

VariantLexicon random_lexicon(Rng& rng, std::size_t words) {
  VariantLexicon lex;
  for (std::size_t i = 0; i < words; ++i) {
    const std::string w = "w" + std::to_string(i);
    lex.add_original(w, random_pron(rng, 5));
    if (rng.chance(0.3)) lex.add_original(w, random_pron(rng, 5));
    if (rng.chance(0.2)) lex.add_reduced(w, random_pron(rng, 4), Variable::CCR);
  }
  return lex;
}

TokenOccurrence token(const VariantLexicon& lex, std::string word, MfaStatus status) {
  TokenOccurrence t;
  t.word = std::move(word);
  t.mfa_status = status;
  for (const auto& v : *lex.find(t.word)) {
    if ((status == MfaStatus::Reduced) == (v.form == Form::Reduced)) {
      t.realized = v.pron;
      break;
    }
  }
  return t;
}

VariantLexicon paper_lexicon() {
  return expand_lexicon(
      parse_cmu_dict("TEST  T EH1 S T\nGUESS  G EH1 S\nTEN  T EH1 N\nCAT  K AE1 T\nCOLD  K OW1 L D\n"
                     "REFRIGERATOR  R IH0 F R IH1 JH ER0 EY2 T ER0\nBEST  B EH1 S T\nCOAL  K OW1 L\n"),
      std::set<std::string, std::less<>>{"test", "cold"});
}

}  // namespace

TEST_CASE("phon_distance examples") {
  CHECK(phon_distance(P("T EH1 S"), P("G EH1 S")) == 1);
  CHECK(phon_distance(P("T EH1 S T"), P("T EH1 S T")) == 0);
  CHECK(phon_distance(P("T EH1 S T"), P("T EH1 S")) == 1);
  CHECK(phon_distance(P("T EH1 S"), P("T EH0 S")) == 0);  // stress-blind
  CHECK(phon_distance(Pronunciation{}, P("T EH1 S")) == 3);
}

TEST_CASE("phon_distance is a metric and matches the oracle") {
  Rng rng(99);
  for (int i = 0; i < 300; ++i) {
    const auto a = random_pron(rng, 7), b = random_pron(rng, 7), c = random_pron(rng, 7);
    const auto ab = phon_distance(a, b);
    CHECK(ab == oracle::levenshtein(oracle::bases(a), oracle::bases(b)));
    CHECK(ab == phon_distance(b, a));
    CHECK(phon_distance(a, a) == 0);
    CHECK((ab == 0) == a.same_bases(b));
    CHECK(phon_distance(a, c) <= ab + phon_distance(b, c));
  }
}

TEST_CASE("neighbors of reduced test contain guess and ten") {
  const auto lex = paper_lexicon();
  const auto set = neighbors(P("T EH1 S"), lex, {}, "test");
  CHECK(set.contains("guess"));
  CHECK(set.contains("ten"));
  CHECK_FALSE(set.contains("cat"));
  CHECK_FALSE(set.contains("test"));
  CHECK_FALSE(set.contains("best"));  // two edits from T EH S

  // Without the exclusion the citation form of test is itself a neighbor.
  CHECK(neighbors(P("T EH1 S"), lex).contains("test"));
  CHECK(neighbors(P("T EH1 S"), VariantLexicon{}).neighbors.empty());

  const NeighborIndex index(lex);
  CHECK(hits(index.query(P("T EH1 S"), "test")) == hits(set));
}

TEST_CASE("reduced variants are candidates only on request") {
  VariantLexicon lex;
  lex.add_original("cold", P("K OW1 L D"));
  lex.add_reduced("cold", P("K OW1 L"), Variable::CCR);
  lex.add_original("bowl", P("B OW1 L"));
  CHECK_FALSE(neighbors(P("G OW1 L"), lex).contains("cold"));
  NeighborOptions inc;
  inc.include_reduced = true;
  CHECK(neighbors(P("G OW1 L"), lex, inc).contains("cold"));
  CHECK(NeighborIndex(lex, inc).query(P("G OW1 L")).contains("cold"));
}

TEST_CASE("neighbors and the index agree with a brute-force scan") {
  Rng rng(2024);
  for (int round = 0; round < 20; ++round) {
    const auto lex = random_lexicon(rng, 50 + rng.below(150));
    for (bool inc : {false, true}) {
      NeighborOptions opts;
      opts.include_reduced = inc;
      const NeighborIndex index(lex, opts);
      for (int q = 0; q < 10; ++q) {
        const auto src = random_pron(rng, 5);
        const std::string exclude = "w" + std::to_string(rng.below(10));
        const auto expected = oracle::brute_neighbors(src, lex, inc, exclude);
        CHECK(hits(neighbors(src, lex, opts, exclude)) == expected);
        CHECK(hits(index.query(src, exclude)) == expected);
      }
    }
  }
}

TEST_CASE("attribute_error") {
  const auto lex = paper_lexicon();
  const auto test_red = token(lex, "test", MfaStatus::Reduced);
  const auto test_orig = token(lex, "test", MfaStatus::Original);
  const auto cold = token(lex, "cold", MfaStatus::Original);

  CHECK(attribute_error(test_red, Substituted{"guess"}, lex).status == Attribution::Neighbor_Error);
  CHECK(attribute_error(test_red, Substituted{"guess"}, lex).distance == 1);
  CHECK(attribute_error(test_orig, Substituted{"guess"}, lex).status == Attribution::Non_Neighbor_Error);
  CHECK(attribute_error(test_orig, Substituted{"best"}, lex).status == Attribution::Neighbor_Error);
  CHECK(attribute_error(cold, Correct{}, lex).status == Attribution::Correct);
  CHECK(attribute_error(cold, Deleted{}, lex).status == Attribution::Deleted);
  CHECK(attribute_error(cold, Substituted{"refrigerator"}, lex).status == Attribution::Non_Neighbor_Error);
  CHECK(attribute_error(cold, Substituted{"coal"}, lex).status == Attribution::Neighbor_Error);

  // A reduced test heard as "test" scores against the reduced pron.
  CHECK(attribute_error(test_red, Substituted{"test"}, lex).status == Attribution::Neighbor_Error);

  const auto unk = attribute_error(cold, Substituted{"zorblax"}, lex);
  CHECK(unk.status == Attribution::Unknown_Pron);
  CHECK(unk.hyp_word == "zorblax");
  CHECK_FALSE(unk.distance);

  const auto supplement = parse_cmu_dict("ZORBLAX  K OW1 L D Z\n");
  CHECK(attribute_error(cold, Substituted{"zorblax"}, lex, &supplement).status == Attribution::Neighbor_Error);

  auto other = cold;
  other.mfa_status = MfaStatus::Other;
  CHECK_THROWS_AS(attribute_error(other, Substituted{"coal"}, lex), Error);
}

TEST_CASE("attribution ignores lexicon insertion order") {
  const auto a = parse_cmu_dict("TEST  T EH1 S T\nGUESS  G EH1 S\nGUESS(1)  G EH1 S T\nCOLD  K OW1 L D\n");
  const auto b = parse_cmu_dict("GUESS  G EH1 S T\nCOLD  K OW1 L D\nGUESS(1)  G EH1 S\nTEST  T EH1 S T\n");
  const auto la = expand_lexicon(a, std::set<std::string, std::less<>>{"test"});
  const auto lb = expand_lexicon(b, std::set<std::string, std::less<>>{"test"});
  for (auto status : {MfaStatus::Original, MfaStatus::Reduced}) {
    const auto ra = attribute_error(token(la, "test", status), Substituted{"guess"}, la);
    const auto rb = attribute_error(token(lb, "test", status), Substituted{"guess"}, lb);
    CHECK(ra.status == rb.status);
    CHECK(ra.distance == rb.distance);
  }
}

TEST_CASE("unknown word report") {
  UnknownWordReport a, b;
  a.add("zed", 2);
  a.add("alpha");
  b.add("beta", 2);
  b.add("alpha");
  a.merge(b);
  CHECK(a.to_csv() == "word,count\nalpha,2\nbeta,2\nzed,2\n");
  UnknownWordReport q;
  q.add("x,y");
  CHECK(q.to_csv() == "word,count\n\"x,y\",1\n");
}
