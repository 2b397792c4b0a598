#include "zkpark/circuit/membership.hpp"

namespace zkpark {

namespace {

struct Synthesis {
  CircuitBuilder cb{kNumPublicInputs};
  PublicInputs publics;
};

Synthesis synthesize(unsigned depth, const MembershipInputs& in) {
  Synthesis s;
  CircuitBuilder& cb = s.cb;
  const Var sk = cb.input(in.sk);
  const Var uid = cb.input(in.uid_field);
  const Var nu = cb.input(in.nu);

  const Lin pk = hash1_gadget(cb, Lin::of(sk));
  const Lin uid_hash = hash1_gadget(cb, Lin::of(uid));
  Lin cur = hash2_gadget(cb, pk, uid_hash);

  for (unsigned l = 0; l < depth; ++l) {
    const Var sib = cb.input(in.path.siblings[l]);
    const Var bit = cb.input(((in.path.index >> l) & 1) != 0 ? Fr::one() : Fr::zero());
    cb.assert_boolean(bit);
    const Var c = cb.materialize(cur);
    // m = bit * (sib - cur) swaps the pair when bit = 1.
    const Var d = cb.materialize(Lin::of(sib) - Lin::of(c));
    const Var m = cb.mul(bit, d);
    cur = hash2_gadget(cb, Lin::of(c) + Lin::of(m), Lin::of(sib) - Lin::of(m));
  }
  const Var root = cb.materialize(cur);
  const Var nf = cb.materialize(hash2_gadget(cb, Lin::of(sk), Lin::of(nu)));

  cb.set_public(0, root);
  cb.set_public(1, nu);
  cb.set_public(2, nf);
  s.publics = PublicInputs{cb.value(root), cb.value(nu), cb.value(nf)};
  return s;
}

void check_depth(unsigned depth) {
  if (depth < IncrementalMerkleTree::kMinDepth || depth > IncrementalMerkleTree::kMaxDepth) {
    throw ConfigError("circuit depth must be in [2, 32]");
  }
}

}  // namespace

ConstraintSystem build_membership_circuit(unsigned depth) {
  check_depth(depth);
  MembershipInputs dummy;
  dummy.path.siblings.resize(depth);
  return synthesize(depth, dummy).cb.finish(depth);
}

std::pair<Witness, PublicInputs> assign_witness(const ConstraintSystem& cs, const MembershipInputs& in) {
  if (in.path.depth() != cs.depth()) throw ArgumentError("path depth does not match circuit depth");
  if (cs.depth() < 64 && (in.path.index >> cs.depth()) != 0) throw ArgumentError("path index exceeds tree capacity");
  Synthesis s = synthesize(cs.depth(), in);
  if (s.cb.gate_count() != cs.used_gates()) throw ArgumentError("constraint system was not built for this statement");
  return {s.cb.witness(), s.publics};
}

std::pair<Witness, PublicInputs> assign_witness(const ConstraintSystem& cs, const IdentitySecret& secret,
                                                std::span<const std::uint8_t> uid, const MerklePath& path,
                                                const Fr& nu) {
  return assign_witness(cs, MembershipInputs{secret.sk(), encode_uid(uid), path, nu});
}

}  // namespace zkpark
