#pragma once

#include <array>
#include <utility>
#include <vector>

#include "zkpark/circuit/constraint_system.hpp"

namespace zkpark {

// Affine combination sum(coeff * var) + constant, kept symbolic until a gate
// needs it as a single wire.
struct Lin {
  std::vector<std::pair<Var, Fr>> terms;
  Fr constant;

  static Lin of(Var v) { return Lin{{{v, Fr::one()}}, Fr::zero()}; }
  static Lin of(const Fr& c) { return Lin{{}, c}; }

  bool is_constant() const { return terms.empty(); }

  Lin& operator+=(const Lin& o);
  Lin& operator-=(const Lin& o);
  Lin& operator*=(const Fr& k);
  Lin& operator+=(const Fr& c) {
    constant += c;
    return *this;
  }

  friend Lin operator+(Lin a, const Lin& b) { return a += b; }
  friend Lin operator-(Lin a, const Lin& b) { return a -= b; }
  friend Lin operator*(Lin a, const Fr& k) { return a *= k; }
  friend Lin operator+(Lin a, const Fr& c) { return a += c; }
};

// Records gates and tracks concrete variable values alongside them, so one
// synthesis pass yields both the structure and the assignment.
class CircuitBuilder {
 public:
  // Creates the shared zero variable and reserves num_public rows up front.
  explicit CircuitBuilder(std::size_t num_public = 0);

  Var input(const Fr& value);
  Var zero() const { return zero_; }

  const Fr& value(Var v) const { return values_[v]; }
  Fr value(const Lin& l) const;

  // k terms cost max(k - 1, 1) gates; a bare variable costs none.
  Var materialize(const Lin& l);
  Var mul(Var a, Var b);
  void assert_boolean(Var v);
  void assert_equal(Var a, Var b);
  void add_gate(const Gate& g) { gates_.push_back(g); }
  Var new_output(const Fr& value);

  void set_public(std::size_t i, Var v);

  std::size_t gate_count() const { return gates_.size(); }

  ConstraintSystem finish(unsigned depth) const;
  Witness witness() const { return Witness{values_}; }

 private:
  Var zero_;
  std::size_t num_public_;
  std::vector<Fr> values_;
  std::vector<Gate> gates_;
};

// Poseidon over Lin lanes with the standard parameters. Constant lanes stay native.
std::array<Lin, 3> poseidon_permute_gadget(CircuitBuilder& cb, std::array<Lin, 3> state);
Lin hash1_gadget(CircuitBuilder& cb, const Lin& a);
Lin hash2_gadget(CircuitBuilder& cb, const Lin& a, const Lin& b);

}  // namespace zkpark
