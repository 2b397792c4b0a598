#include "zkpark/circuit/builder.hpp"

#include <algorithm>

#include "zkpark/poseidon/poseidon.hpp"

namespace zkpark {

namespace {

void merge_term(std::vector<std::pair<Var, Fr>>& terms, Var v, const Fr& k) {
  for (auto it = terms.begin(); it != terms.end(); ++it) {
    if (it->first == v) {
      it->second += k;
      if (it->second.is_zero()) terms.erase(it);
      return;
    }
  }
  if (!k.is_zero()) terms.emplace_back(v, k);
}

}  // namespace

Lin& Lin::operator+=(const Lin& o) {
  for (const auto& [v, k] : o.terms) merge_term(terms, v, k);
  constant += o.constant;
  return *this;
}

Lin& Lin::operator-=(const Lin& o) {
  for (const auto& [v, k] : o.terms) merge_term(terms, v, -k);
  constant -= o.constant;
  return *this;
}

Lin& Lin::operator*=(const Fr& k) {
  if (k.is_zero()) {
    terms.clear();
  } else {
    for (auto& t : terms) t.second *= k;
  }
  constant *= k;
  return *this;
}

CircuitBuilder::CircuitBuilder(std::size_t num_public) : num_public_(num_public) {
  zero_ = input(Fr::zero());
  Gate pin;
  pin.q_l = Fr::one();
  pin.a = pin.b = pin.c = zero_;
  // Public rows first; their wire a is filled in by set_public.
  for (std::size_t i = 0; i < num_public_; ++i) gates_.push_back(pin);
  gates_.push_back(pin);
}

Var CircuitBuilder::input(const Fr& value) {
  values_.push_back(value);
  return static_cast<Var>(values_.size() - 1);
}

Var CircuitBuilder::new_output(const Fr& value) { return input(value); }

Fr CircuitBuilder::value(const Lin& l) const {
  Fr acc = l.constant;
  for (const auto& [v, k] : l.terms) acc += k * values_[v];
  return acc;
}

Var CircuitBuilder::materialize(const Lin& l) {
  if (l.terms.size() == 1 && l.terms[0].second.is_one() && l.constant.is_zero()) return l.terms[0].first;
  const Var out = new_output(value(l));
  Gate g;
  g.q_o = -Fr::one();
  g.c = out;
  g.q_c = l.constant;
  if (l.terms.empty()) {
    g.a = g.b = zero_;
    gates_.push_back(g);
    return out;
  }
  // Fold terms pairwise into running partial sums.
  Var acc = l.terms[0].first;
  Fr acc_k = l.terms[0].second;
  std::size_t i = 1;
  while (true) {
    const bool last = i + 1 >= l.terms.size();
    Gate step;
    step.q_l = acc_k;
    step.a = acc;
    step.b = zero_;
    if (i < l.terms.size()) {
      step.q_r = l.terms[i].second;
      step.b = l.terms[i].first;
    }
    if (last) {
      step.q_o = -Fr::one();
      step.c = out;
      step.q_c = l.constant;
      gates_.push_back(step);
      return out;
    }
    Lin partial;
    partial.terms = {{acc, acc_k}, {l.terms[i].first, l.terms[i].second}};
    const Var t = new_output(value(partial));
    step.q_o = -Fr::one();
    step.c = t;
    gates_.push_back(step);
    acc = t;
    acc_k = Fr::one();
    ++i;
  }
}

Var CircuitBuilder::mul(Var a, Var b) {
  const Var out = new_output(values_[a] * values_[b]);
  Gate g;
  g.q_m = Fr::one();
  g.q_o = -Fr::one();
  g.a = a;
  g.b = b;
  g.c = out;
  gates_.push_back(g);
  return out;
}

void CircuitBuilder::assert_boolean(Var v) {
  Gate g;
  g.q_m = Fr::one();
  g.q_l = -Fr::one();
  g.a = g.b = v;
  g.c = zero_;
  gates_.push_back(g);
}

void CircuitBuilder::assert_equal(Var a, Var b) {
  Gate g;
  g.q_l = Fr::one();
  g.q_r = -Fr::one();
  g.a = a;
  g.b = b;
  g.c = zero_;
  gates_.push_back(g);
}

void CircuitBuilder::set_public(std::size_t i, Var v) {
  if (i >= num_public_) throw ArgumentError("public index out of range");
  gates_[i].a = v;
}

ConstraintSystem CircuitBuilder::finish(unsigned depth) const {
  return ConstraintSystem(depth, gates_, values_.size(), num_public_, zero_);
}

namespace {

Lin pow5(CircuitBuilder& cb, const Lin& x) {
  if (x.is_constant()) {
    const Fr x2 = x.constant.square();
    return Lin::of(x2.square() * x.constant);
  }
  const Var v = cb.materialize(x);
  const Var v2 = cb.mul(v, v);
  const Var v4 = cb.mul(v2, v2);
  return Lin::of(cb.mul(v4, v));
}

}  // namespace

std::array<Lin, 3> poseidon_permute_gadget(CircuitBuilder& cb, std::array<Lin, 3> state) {
  const auto& p = PoseidonParams::standard();
  const auto& mds = p.mds();
  for (std::size_t r = 0; r < p.rounds(); ++r) {
    for (std::size_t i = 0; i < 3; ++i) state[i] += p.round_constant(r, i);
    if (p.is_full_round(r)) {
      for (auto& x : state) x = pow5(cb, x);
    } else {
      state[0] = pow5(cb, state[0]);
      // Keep the untouched lanes from accumulating ever longer combinations.
      for (std::size_t i = 1; i < 3; ++i) {
        if (state[i].terms.size() > 1) state[i] = Lin::of(cb.materialize(state[i]));
      }
    }
    std::array<Lin, 3> next;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) next[i] += state[j] * mds[i][j];
    }
    state = std::move(next);
  }
  return state;
}

Lin hash1_gadget(CircuitBuilder& cb, const Lin& a) {
  return poseidon_permute_gadget(cb, {Lin::of(Fr::from_u64(kHash1Domain)), a, Lin::of(Fr::zero())})[0];
}

Lin hash2_gadget(CircuitBuilder& cb, const Lin& a, const Lin& b) {
  return poseidon_permute_gadget(cb, {Lin::of(Fr::from_u64(kHash2Domain)), a, b})[0];
}

}  // namespace zkpark
