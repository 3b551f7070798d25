#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ccdsk/errors.hpp"
#include "ccdsk/omniscience.hpp"
#include "ccdsk/protocol.hpp"
#include "ccdsk/secrecy.hpp"
#include "oracles.hpp"

using namespace ccdsk;
using gf::Matrix;

namespace {

const MessageFamily kTriangle = MessageFamily::from_lists(3, {{1, 2}, {0, 2}, {0, 1}});
const MessageFamily kShared = MessageFamily::from_lists(3, {{0, 1}, {1, 2}});

std::vector<Element> random_vector(std::mt19937_64& rng, std::size_t size, std::uint32_t q) {
  std::vector<Element> x(size);
  for (auto& v : x) v = static_cast<Element>(rng() % q);
  return x;
}

}  // namespace

TEST(Omniscience, TwoSingletons) {
  const auto fam = MessageFamily::from_lists(2, {{0}, {1}});
  const auto p = synth_omniscience(fam, gf::make_field(3, 1));
  ASSERT_EQ(p.rows.size(), 2u);
  EXPECT_EQ(p.rows[0], (Row{0, {1, 0}}));
  EXPECT_EQ(p.rows[1], (Row{1, {0, 1}}));
  EXPECT_TRUE(p.is_omniscience());
}

TEST(Omniscience, TriangleOverGF5) {
  const auto p = synth_omniscience(kTriangle, gf::make_field(5, 1));
  ASSERT_EQ(p.rows.size(), 2u);
  EXPECT_EQ(p.rows[0], (Row{0, {0, 1, 1}}));
  EXPECT_EQ(p.rows[1], (Row{1, {1, 0, 2}}));
  EXPECT_TRUE(check_algebraic(kTriangle, p).ok());
}

TEST(Omniscience, GapOverGF11) {
  const auto fam = make_gap(4);
  const auto p = synth_omniscience(fam, gf::make_field(11, 1));
  ASSERT_EQ(p.rows.size(), 2u);
  EXPECT_EQ(p.rows[0], (Row{0, {1, 1, 1, 1}}));
  EXPECT_EQ(p.rows[1], (Row{0, {1, 2, 4, 8}}));
  EXPECT_TRUE(check_algebraic(fam, p).ok());
}

TEST(Omniscience, FieldMustExceedClientCount) {
  EXPECT_THROW(synth_omniscience(kTriangle, gf::make_field(3, 1)), InputError);
  EXPECT_THROW(synth_sk(make_gap(4), 1, gf::make_field(7, 1)), InputError);
  EXPECT_EQ(default_field(3).order(), 5u);
  EXPECT_EQ(default_field(15).order(), 17u);
}

TEST(SecretKey, SharedMessage) {
  const auto p = synth_sk(kShared, 1, default_field(2));
  EXPECT_TRUE(p.rows.empty());
  EXPECT_EQ(p.keys, Matrix::from_rows({{0, 1, 0}}, 3));
  EXPECT_TRUE(check_algebraic(kShared, p).ok());
}

TEST(SecretKey, GapOverGF11) {
  const auto fam = make_gap(4);
  const auto p = synth_sk(fam, 1, gf::make_field(11, 1));
  EXPECT_EQ(p.rows.size(), 2u);
  const auto witness = s_l_tau(fam, 1).witness;
  EXPECT_EQ(witness.size(), 3u);
  for (std::size_t c = 0; c < 4; ++c)
    if (std::find(witness.begin(), witness.end(), c) == witness.end()) EXPECT_EQ(p.keys(0, c), 0u);
  EXPECT_TRUE(check_algebraic(fam, p).ok());
}

TEST(SecretKey, Example1OverGF17) {
  const auto fam = make_example1();
  const auto field = gf::make_field(17, 1);
  const std::vector<std::size_t> expected{2, 4, 4, 6, 8, 8};
  for (std::size_t tau = 1; tau <= 6; ++tau) {
    const auto p = synth_sk(fam, tau, field);
    EXPECT_EQ(p.rows.size(), expected[tau - 1]);
    EXPECT_EQ(p.tau(), tau);
    EXPECT_TRUE(check_algebraic(fam, p).ok()) << tau;
  }
  EXPECT_THROW(synth_sk(fam, 7, field), InfeasibleError);
}

TEST(Chain, SingleSharedMessage) {
  const auto fam = MessageFamily::from_lists(1, {{0}, {0}});
  const auto p = synth_chain(fam, gf::make_field(2, 1));
  EXPECT_TRUE(p.rows.empty());
  EXPECT_EQ(p.keys, Matrix::from_rows({{1}}, 1));
  EXPECT_TRUE(check_algebraic(fam, p).ok());
}

TEST(Chain, PathOverGF2) {
  const auto p = synth_chain(kShared, gf::make_field(2, 1));
  ASSERT_EQ(p.rows.size(), 2u);
  EXPECT_EQ(p.rows[0], (Row{0, {1, 1, 0}}));
  EXPECT_EQ(p.rows[1], (Row{1, {1, 0, 1}}));
  EXPECT_TRUE(check_algebraic(kShared, p).ok());
}

TEST(Chain, PinK4OverGF3) {
  const auto fam = make_pin(4);
  const auto p = synth_chain(fam, gf::make_field(3, 1));
  EXPECT_EQ(p.rows.size(), 5u);
  EXPECT_EQ(p.keys, Matrix::from_rows({{1, 0, 0, 0, 0, 0}}, 6));
  EXPECT_TRUE(check_algebraic(fam, p).ok());
  EXPECT_THROW(synth_chain(MessageFamily::from_lists(2, {{0}, {1}}), gf::make_field(3, 1)), InputError);
}

TEST(Chain, TransformIsABijection) {
  for (std::uint64_t q : {2, 3, 4}) {
    const auto f = gf::field_of_order(q);
    const std::size_t m = 4;
    std::set<std::vector<Element>> images;
    std::vector<Element> x(m, 0);
    while (true) {
      std::vector<Element> y{x[0]};
      for (std::size_t i = 1; i < m; ++i) y.push_back(f.add(x[0], x[i]));
      images.insert(y);
      std::size_t i = 0;
      while (i < m && x[i] == q - 1) x[i++] = 0;
      if (i == m) break;
      ++x[i];
    }
    EXPECT_EQ(images.size(), q * q * q * q);
  }
}

TEST(Gap, ReferenceTransmissionForM4) {
  const auto p = gap_protocol(4);
  EXPECT_EQ(p.field.order(), 4u);
  EXPECT_EQ(p.split, 2u);
  EXPECT_EQ(p.transmissions(), 1u);
  const Element alpha = 2, beta = 3;
  EXPECT_EQ(p.rows[0], (Row{0, {1, 0, alpha, 0, 1, 0, 0, 0}}));
  EXPECT_EQ(p.rows[1], (Row{0, {1, 0, beta, 0, 0, 0, 1, 0}}));
  EXPECT_EQ(p.keys, Matrix::from_rows({{0, 0, 0, 0, 1, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 1, 0}}, 8));
  EXPECT_TRUE(check_algebraic(make_gap(4), p).ok());
}

TEST(Gap, LargerInstances) {
  EXPECT_EQ(gap_component_order(4), 4u);
  EXPECT_EQ(gap_component_order(6), 5u);
  EXPECT_EQ(gap_component_order(8), 7u);
  for (std::size_t m : {6, 8, 10}) {
    const auto p = gap_protocol(m);
    EXPECT_EQ(p.transmissions(), m / 2 - 1);
    EXPECT_GT(std::uint64_t{p.field.order()} * p.field.order(), make_gap(m).clients());
    EXPECT_TRUE(check_algebraic(make_gap(m), p).ok()) << m;
  }
  EXPECT_THROW(gap_protocol(5), InputError);
  EXPECT_THROW(gap_protocol(2), InputError);
}

TEST(Algebraic, DetectsTampering) {
  const auto fam = kShared;
  auto leaky = synth_chain(fam, gf::make_field(3, 1));
  leaky.rows.push_back(Row{0, {1, 0, 0}});
  const auto r1 = check_algebraic(fam, leaky);
  EXPECT_FALSE(r1.independence.pass);
  EXPECT_TRUE(r1.realizable.pass);

  auto unrealizable = synth_chain(fam, gf::make_field(3, 1));
  unrealizable.rows[0].client = 1;  // client 2 does not hold message 1
  EXPECT_FALSE(check_algebraic(fam, unrealizable).realizable.pass);

  auto undecodable = synth_chain(fam, gf::make_field(3, 1));
  undecodable.rows.clear();
  EXPECT_FALSE(check_algebraic(fam, undecodable).agreement.pass);

  auto degenerate = synth_chain(fam, gf::make_field(3, 1));
  degenerate.keys.append_row(std::vector<Element>{2, 0, 0});
  EXPECT_FALSE(check_algebraic(fam, degenerate).uniformity.pass);

  auto wrong_shape = synth_chain(fam, gf::make_field(3, 1));
  wrong_shape.rows[0].coeffs.push_back(0);
  EXPECT_THROW(check_algebraic(fam, wrong_shape), InputError);
}

TEST(Decode, Examples) {
  const auto two = MessageFamily::from_lists(2, {{0}, {1}});
  const auto omni = synth_omniscience(two, gf::make_field(3, 1));
  const std::vector<Element> x{2, 1};
  EXPECT_EQ(decode(two, omni, 0, {2, 0}, transcript_of(omni, x)), x);

  const auto f5 = gf::make_field(5, 1);
  const auto chain = synth_chain(make_pin(4), f5);
  const std::vector<Element> y{3, 1, 4, 1, 0, 2};
  for (std::size_t j = 0; j < 4; ++j) {
    std::vector<Element> own(6, 0);
    for (auto e : members(make_pin(4).holding(j))) own[e] = y[e];
    EXPECT_EQ(decode(make_pin(4), chain, j, own, transcript_of(chain, y)), std::vector<Element>{3});
  }

  const auto gap = gap_protocol(4);
  const auto fam = make_gap(4);
  const std::vector<Element> z{1, 2, 3, 0, 2, 1, 3, 3};
  const auto t = transcript_of(gap, z);
  for (std::size_t j = 0; j < fam.clients(); ++j) {
    std::vector<Element> own(8, 0);
    for (auto c : held_coordinates(fam, gap, j)) own[c] = z[c];
    EXPECT_EQ(decode(fam, gap, j, own, t), (std::vector<Element>{2, 3})) << j;
  }

  auto broken = synth_chain(kShared, f5);
  broken.rows.clear();
  EXPECT_THROW(decode(kShared, broken, 1, {0, 0, 0}, {}), VerificationError);
}

TEST(ProtocolFile, RoundTrip) {
  const std::vector<std::pair<MessageFamily, LinearProtocol>> cases{
      {kTriangle, synth_omniscience(kTriangle, gf::make_field(5, 1))},
      {kShared, synth_sk(kShared, 1, gf::field_of_order(9))},
      {make_pin(4), synth_chain(make_pin(4), gf::field_of_order(4))},
      {make_gap(4), gap_protocol(4)},
      {make_gap(6), gap_protocol(6)}};
  for (const auto& [fam, p] : cases) {
    const auto text = serialize_protocol(p);
    const auto back = parse_protocol(text, fam.labels());
    EXPECT_EQ(back, p);
    EXPECT_EQ(serialize_protocol(back), text);
  }
  EXPECT_THROW(parse_protocol(R"({"field":{"p":4,"k":1},"rows":[],"keys":[]})", 2), InputError);
  EXPECT_THROW(parse_protocol(R"({"field":{"p":3,"k":1},"rows":[{"client":1,"coeffs":[1]}],"keys":[]})", 2),
               InputError);
  EXPECT_THROW(parse_protocol(R"({"field":{"p":3,"k":1},"rows":[],"keys":[[3,0]]})", 2), InputError);
}

TEST(Synthesis, RandomFamiliesMeetTheirTargets) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = 1 + rng() % 5, m = 1 + rng() % 6;
    const auto fam = oracle::random_family(rng, n, m);
    const auto field = default_field(n);
    const auto omni = synth_omniscience(fam, field);
    ASSERT_EQ(omni.rows.size(), compute_m_star(fam).m_star);
    ASSERT_TRUE(check_algebraic(fam, omni).ok());
    for (int draw = 0; draw < 10; ++draw) {
      const auto x = random_vector(rng, m, field.order());
      const auto t = transcript_of(omni, x);
      for (std::size_t j = 0; j < n; ++j) ASSERT_EQ(decode(fam, omni, j, x, t), x);
    }
    for (std::size_t tau = 1; tau <= 3; ++tau) {
      const auto entry = s_l_tau(fam, tau);
      if (!entry.s_l) {
        EXPECT_THROW(synth_sk(fam, tau, field), InfeasibleError);
        continue;
      }
      const auto p = synth_sk(fam, tau, field);
      ASSERT_EQ(p.rows.size(), *entry.s_l);
      ASSERT_TRUE(check_algebraic(fam, p).ok());
    }
  }
}
