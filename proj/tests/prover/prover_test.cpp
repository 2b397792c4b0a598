#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "zkpark/algebra/msm.hpp"
#include "zkpark/circuit/membership.hpp"
#include "zkpark/kernels/msm.hpp"
#include "zkpark/prover/plonk.hpp"
#include "zkpark/prover/transcript.hpp"

namespace zkpark {
namespace {

const Bytes kSeed = {'p', 'r', 'o', 'v', 'e', 'r', '-', 't', 'e', 's', 't'};

std::shared_ptr<const Srs> shared_srs() {
  static const auto srs = std::make_shared<const Srs>(trusted_setup(16384 + 5, kSeed));
  return srs;
}

struct Keys {
  ConstraintSystem cs;
  ProvingKey pk;
  VerifyingKey vk;
};

const Keys& keys(unsigned depth) {
  static std::map<unsigned, Keys> cache;
  auto it = cache.find(depth);
  if (it == cache.end()) {
    ConstraintSystem cs = build_membership_circuit(depth);
    auto [pk, vk] = preprocess(cs, shared_srs());
    it = cache.emplace(depth, Keys{std::move(cs), std::move(pk), std::move(vk)}).first;
  }
  return it->second;
}

struct Instance {
  Witness w;
  PublicInputs x;
};

Instance honest_instance(unsigned depth, std::mt19937_64& rng) {
  IncrementalMerkleTree tree(depth);
  const std::size_t before = rng() % 3;
  for (std::size_t i = 0; i < before; ++i) tree.insert(Fr::random(rng));
  const IdentitySecret secret = IdentitySecret::generate(rng);
  const Bytes uid = {'U', static_cast<std::uint8_t>(rng()), '7'};
  const std::uint64_t idx = tree.insert(commitment(secret, uid));
  tree.insert(Fr::random(rng));
  auto [w, x] = assign_witness(keys(depth).cs, secret, uid, tree.path(idx), Fr::random(rng));
  return {std::move(w), x};
}

// Evaluations on H of the Lagrange basis at tau, computed from the seed.
std::vector<G1Affine> lagrange_srs(std::size_t n) {
  const Fr tau = detail::tau_from_seed(kSeed);
  const EvaluationDomain d(n);
  std::vector<Fr> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = d.lagrange_eval(i, tau);
  return kernels::fixed_base_mul_serial(g1_generator(), l);
}

TEST(Srs, PairingConsistentAndMarked) {
  const Srs srs = trusted_setup(16, kSeed);
  EXPECT_TRUE(srs.pairing_consistent());
  EXPECT_EQ(srs.max_degree(), 16U);
  EXPECT_NE(srs.marker.find("UNSAFE-FOR-PRODUCTION"), std::string_view::npos);
}

TEST(Srs, DeterministicInSeed) {
  EXPECT_EQ(trusted_setup(32, kSeed).serialize(), trusted_setup(32, kSeed).serialize());
  const Bytes other = {'x'};
  EXPECT_NE(trusted_setup(32, kSeed).serialize(), trusted_setup(32, other).serialize());
}

TEST(Srs, CommitmentEqualsEvaluationAtTau) {
  std::mt19937_64 rng(41);
  const Srs srs = trusted_setup(40, kSeed);
  const Fr tau = detail::tau_from_seed(kSeed);
  for (std::size_t len : {1U, 5U, 41U}) {
    const Polynomial p = Polynomial::random(len - 1, rng);
    const G1Affine expect = (G1Jacobian(g1_generator()) * p.evaluate(tau)).to_affine();
    EXPECT_EQ(commit(srs, p.coeffs()), expect) << "len=" << len;
  }
  EXPECT_THROW(commit(srs, std::vector<Fr>(42, Fr::one())), CapacityError);
}

TEST(Preprocess, DeterministicAndDepthSensitive) {
  const ConstraintSystem cs = build_membership_circuit(2);
  const auto first = preprocess(cs, shared_srs()).second;
  const auto second = preprocess(cs, shared_srs()).second;
  EXPECT_EQ(first, second);
  EXPECT_EQ(first.digest(), second.digest());
  EXPECT_NE(first, keys(4).vk);
  EXPECT_NE(first.digest(), keys(4).vk.digest());
}

TEST(Preprocess, RejectsSmallSrs) {
  const ConstraintSystem cs = build_membership_circuit(2);
  auto small = std::make_shared<const Srs>(trusted_setup(cs.n_gates() + 4, kSeed));
  EXPECT_THROW(preprocess(cs, small), CapacityError);
  EXPECT_THROW(preprocess(cs, nullptr), CapacityError);
}

TEST(Preprocess, CommitmentsMatchLagrangeBasisOracle) {
  const Keys& k = keys(2);
  const std::size_t n = k.cs.n_gates();
  const std::vector<G1Affine> basis = lagrange_srs(n);
  for (std::size_t s = 0; s < 5; ++s) {
    EXPECT_EQ(msm(basis, k.cs.selector(s)), k.vk.selectors[s]) << "selector " << s;
  }
  // sigma_col(omega^row) is the label k_c * omega^r of the slot the copy
  // permutation sends (col, row) to.
  const EvaluationDomain d(n);
  const Fr ks[3] = {Fr::one(), plonk_k1(), plonk_k2()};
  const auto& perm = k.cs.copy_permutation();
  for (std::size_t col = 0; col < 3; ++col) {
    std::vector<Fr> evals(n);
    for (std::size_t row = 0; row < n; ++row) {
      const std::uint32_t target = perm[col * n + row];
      evals[row] = ks[target / n] * d.element(target % n);
    }
    EXPECT_EQ(msm(basis, evals), k.vk.sigmas[col]) << "sigma " << col;
  }
}

TEST(VerifyingKey, SerializeRoundTrip) {
  const VerifyingKey& vk = keys(2).vk;
  const Bytes bytes = vk.serialize();
  EXPECT_EQ(VerifyingKey::deserialize(bytes), vk);
  std::uint64_t n = 0;
  for (int i = 7; i >= 0; --i) n = (n << 8) | bytes[static_cast<std::size_t>(i)];
  EXPECT_EQ(n, vk.n);
  EXPECT_THROW(VerifyingKey::deserialize(std::span<const std::uint8_t>(bytes.data(), bytes.size() - 1)), DecodeError);
  Bytes extra = bytes;
  extra.push_back(0);
  EXPECT_THROW(VerifyingKey::deserialize(extra), DecodeError);
}

TEST(Prove, HonestProofVerifiesAndSerializes) {
  std::mt19937_64 rng(42);
  const Keys& k = keys(2);
  const Instance inst = honest_instance(2, rng);
  const Proof proof = prove(k.pk, inst.x, inst.w, rng);
  EXPECT_TRUE(verify(k.vk, inst.x, proof));
  const auto bytes = proof.serialize();
  EXPECT_EQ(bytes.size(), 768U);
  EXPECT_EQ(Proof::deserialize(bytes), proof);
  EXPECT_TRUE(verify(k.vk, inst.x, std::span<const std::uint8_t>(bytes)));
  EXPECT_THROW(Proof::deserialize(std::span<const std::uint8_t>(bytes.data(), 767)), DecodeError);
  EXPECT_THROW(verify(k.vk, inst.x, std::span<const std::uint8_t>(bytes.data(), 700)), DecodeError);

  PublicInputs wrong_nu = inst.x;
  wrong_nu.nu += Fr::one();
  EXPECT_FALSE(verify(k.vk, wrong_nu, proof));
  // A proof is bound to its own vk.
  EXPECT_FALSE(verify(keys(4).vk, inst.x, proof));
}

TEST(Prove, FreshRandomnessGivesFreshProof) {
  std::mt19937_64 rng(43);
  const Keys& k = keys(2);
  const Instance inst = honest_instance(2, rng);
  std::mt19937_64 r1(1);
  std::mt19937_64 r2(2);
  const Proof p1 = prove(k.pk, inst.x, inst.w, r1);
  const Proof p2 = prove(k.pk, inst.x, inst.w, r2);
  EXPECT_NE(p1.serialize(), p2.serialize());
  EXPECT_TRUE(verify(k.vk, inst.x, p1));
  EXPECT_TRUE(verify(k.vk, inst.x, p2));
}

TEST(Prove, MismatchedPublicsRefused) {
  std::mt19937_64 rng(44);
  const Keys& k = keys(2);
  const Instance inst = honest_instance(2, rng);
  for (int field = 0; field < 3; ++field) {
    PublicInputs x = inst.x;
    (field == 0 ? x.rh : field == 1 ? x.nu : x.nf) += Fr::one();
    EXPECT_THROW(prove(k.pk, x, inst.w, rng), UnsatisfiedWitness) << "field " << field;
  }
}

TEST(Prove, OracleEquivalenceOnSmallSample) {
  std::mt19937_64 rng(45);
  for (unsigned depth : {2U, 4U}) {
    const Keys& k = keys(depth);
    for (int trial = 0; trial < 3; ++trial) {
      Instance inst = honest_instance(depth, rng);
      ASSERT_TRUE(check_satisfied(k.cs, inst.w, inst.x));
      EXPECT_TRUE(verify(k.vk, inst.x, prove(k.pk, inst.x, inst.w, rng)));
      // Perturb one non-zero witness variable.
      const std::size_t v = 1 + rng() % (inst.w.values.size() - 1);
      inst.w.values[v] += Fr::one();
      EXPECT_FALSE(check_satisfied(k.cs, inst.w, inst.x));
      EXPECT_THROW(prove(k.pk, inst.x, inst.w, rng), UnsatisfiedWitness);
    }
  }
}

TEST(Verify, ByteMutationSweepAtDepthFour) {
  std::mt19937_64 rng(46);
  const Keys& k = keys(4);
  const Instance inst = honest_instance(4, rng);
  const auto bytes = prove(k.pk, inst.x, inst.w, rng).serialize();
  std::size_t accepted = 0;
  for (std::size_t pos = 0; pos < bytes.size(); ++pos) {
    auto mutated = bytes;
    mutated[pos] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    try {
      if (verify(k.vk, inst.x, std::span<const std::uint8_t>(mutated))) ++accepted;
    } catch (const DecodeError&) {
    }
  }
  EXPECT_EQ(accepted, 0U);
}

TEST(Transcript, EveryPublicInputMovesTheChallenges) {
  std::mt19937_64 rng(47);
  const Keys& k = keys(2);
  const Instance inst = honest_instance(2, rng);
  const Proof proof = prove(k.pk, inst.x, inst.w, rng);
  const Challenges base = derive_challenges(k.vk, inst.x, proof);
  for (int field = 0; field < 3; ++field) {
    PublicInputs x = inst.x;
    (field == 0 ? x.rh : field == 1 ? x.nu : x.nf) += Fr::one();
    const Challenges moved = derive_challenges(k.vk, x, proof);
    EXPECT_NE(moved.beta, base.beta);
    EXPECT_NE(moved.zeta, base.zeta);
    EXPECT_NE(moved.u, base.u);
  }
}

TEST(Transcript, LabelsAndFramingMatter) {
  Transcript a(kPlonkProtocol);
  Transcript b(kPlonkProtocol);
  Transcript c(kPlonkProtocol);
  const Bytes ab = {'a', 'b'};
  const Bytes bb = {'b'};
  const Bytes a1 = {'a'};
  a.absorb("x", ab);
  b.absorb("x", a1);
  b.absorb("x", bb);
  c.absorb("y", ab);
  const Fr ca = a.challenge("c");
  EXPECT_NE(ca, b.challenge("c"));
  EXPECT_NE(ca, c.challenge("c"));
  // Successive squeezes differ.
  EXPECT_NE(ca, a.challenge("c"));
}

TEST(ZeroKnowledgeSurrogate, TwentyProofsShareNoGroupElement) {
  std::mt19937_64 rng(48);
  const Keys& k = keys(2);
  const Instance inst = honest_instance(2, rng);
  std::set<Bytes> seen;
  std::size_t total = 0;
  for (int i = 0; i < 20; ++i) {
    const Proof p = prove(k.pk, inst.x, inst.w, rng);
    for (const G1Affine* g : {&p.a, &p.b, &p.c, &p.z, &p.t_lo, &p.t_mid, &p.t_hi, &p.w_zeta, &p.w_zeta_omega}) {
      const auto e = encode_g1(*g);
      seen.insert(Bytes(e.begin(), e.end()));
      ++total;
    }
  }
  EXPECT_EQ(seen.size(), total);
}

}  // namespace
}  // namespace zkpark
